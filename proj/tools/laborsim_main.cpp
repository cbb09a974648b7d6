// laborsim: command-line front end for the labor market simulator.
//
// Subcommands: simulate, beveridge, gamma-sweep, neugart, coupled, fit.
// Exit codes: 0 success, 2 configuration error, 3 runtime or domain error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "laborsim/runner.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out;
  std::string grid;
  std::string b_range;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int trials = 0;
  int threads = -1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw laborsim::ConfigError("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

laborsim::RunConfig build_config(laborsim::Mode mode, const CommonFlags& flags,
                                 const std::string& fit_input) {
  laborsim::RunConfig config =
      flags.config_path.empty()
          ? laborsim::default_config(mode)
          : laborsim::parse_config(read_file(flags.config_path), mode);
  if (flags.seed_set) {
    config.seed = flags.seed;
    config.market.seed = flags.seed;
  }
  if (!flags.out.empty()) config.output_path = flags.out;
  if (flags.trials > 0) config.trials = flags.trials;
  if (flags.threads >= 0) config.threads = flags.threads;
  if (!flags.grid.empty()) config.sweep = laborsim::parse_grid_spec(flags.grid);
  if (!flags.b_range.empty()) {
    const auto colon = flags.b_range.find(':');
    if (colon == std::string::npos)
      throw laborsim::ConfigError("--b-range expects lo:hi");
    config.offset_lo = std::stod(flags.b_range.substr(0, colon));
    config.offset_hi = std::stod(flags.b_range.substr(colon + 1));
    config.offset_range_set = true;
  }
  if (!fit_input.empty()) config.fit_input = fit_input;
  laborsim::validate(config);
  return config;
}

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool sweep_flags) {
  cmd->add_option("--config", flags.config_path, "Run configuration file");
  cmd->add_option("--out", flags.out, "Output table path");
  cmd->add_option("--seed", flags.seed, "RNG seed (64-bit)")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--threads", flags.threads, "Worker threads (0 = all cores)");
  if (sweep_flags) {
    cmd->add_option("--trials", flags.trials, "Independent trials per cell");
    cmd->add_option("--grid", flags.grid, "Grid override start:stop:count[:log]");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic labor market simulator"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string fit_input;

  add_common_flags(app.add_subcommand("simulate",
                                      "Run one market and write t,U_t"),
                   flags, false);
  add_common_flags(
      app.add_subcommand("beveridge", "Employment versus job offer ratio"),
      flags, true);
  add_common_flags(
      app.add_subcommand("gamma-sweep", "Employment versus ranking weight"),
      flags, true);
  add_common_flags(
      app.add_subcommand("neugart", "Iterate the macro maps and write t,U,pi"),
      flags, false);
  add_common_flags(app.add_subcommand(
                       "coupled", "Market-driven inflation map, writes t,U,pi"),
                   flags, false);
  CLI::App* fit =
      app.add_subcommand("fit", "Fit pi + b ~ U^-c to a (U, pi) table");
  fit->add_option("input", fit_input, "Delimiter-separated (U, pi) data")
      ->required();
  add_common_flags(fit, flags, false);
  fit->add_option("--b-range", flags.b_range, "Offset search range lo:hi");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const laborsim::Mode mode =
        laborsim::mode_from_string(app.get_subcommands().front()->get_name());
    const laborsim::RunConfig config = build_config(mode, flags, fit_input);
    const laborsim::RunArtifacts artifacts = laborsim::execute(config);
    std::cerr << "wrote " << artifacts.table.string() << " and "
              << artifacts.metadata.string() << '\n';
    return 0;
  } catch (const laborsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
