#include "laborsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <vector>

namespace laborsim {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::simulate: return "simulate";
    case Mode::beveridge: return "beveridge";
    case Mode::gamma_sweep: return "gamma-sweep";
    case Mode::neugart: return "neugart";
    case Mode::coupled: return "coupled";
    case Mode::fit: return "fit";
  }
  return "unknown";
}

Mode mode_from_string(std::string_view name) {
  if (name == "simulate") return Mode::simulate;
  if (name == "beveridge") return Mode::beveridge;
  if (name == "gamma-sweep") return Mode::gamma_sweep;
  if (name == "neugart") return Mode::neugart;
  if (name == "coupled") return Mode::coupled;
  if (name == "fit") return Mode::fit;
  throw ConfigError("unknown mode '" + std::string(name) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view key, std::string_view value) {
  const std::string text(trim(value));
  char* end = nullptr;
  const double parsed = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || text.empty())
    throw ConfigError(std::string(key) + ": expected a number, got '" + text + "'");
  return parsed;
}

long long parse_integer(std::string_view key, std::string_view value) {
  const std::string text(trim(value));
  long long parsed = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), parsed);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError(std::string(key) + ": expected an integer, got '" + text + "'");
  return parsed;
}

std::uint64_t parse_seed(std::string_view key, std::string_view value) {
  const std::string text(trim(value));
  std::uint64_t parsed = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), parsed);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError(std::string(key) + ": expected an unsigned integer, got '" +
                      text + "'");
  return parsed;
}

std::vector<double> parse_double_list(std::string_view key, std::string_view value) {
  std::vector<double> values;
  std::string_view rest = value;
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    values.push_back(parse_double(key, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (values.empty()) throw ConfigError(std::string(key) + ": empty list");
  return values;
}

// section -> key -> raw value, in file order for error reporting.
using RawConfig = std::map<std::string, std::map<std::string, std::string>>;

RawConfig lex_config(std::string_view text) {
  RawConfig raw;
  std::string section;
  std::size_t line_number = 0;
  std::string_view rest = text;
  while (!rest.empty()) {
    ++line_number;
    const std::size_t newline = rest.find('\n');
    std::string_view line = rest.substr(0, newline);
    rest = newline == std::string_view::npos ? std::string_view{}
                                             : rest.substr(newline + 1);
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string_view::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_number) +
                          ": unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const std::size_t equals = line.find('=');
    if (equals == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_number) +
                        ": expected 'key = value'");
    const std::string key(trim(line.substr(0, equals)));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_number) + ": empty key");
    raw[section][key] = std::string(trim(line.substr(equals + 1)));
  }
  return raw;
}

std::string key_path(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

}  // namespace

GridSpec parse_grid_spec(std::string_view text) {
  std::vector<std::string_view> parts;
  std::string_view rest = text;
  while (true) {
    const std::size_t colon = rest.find(':');
    parts.push_back(rest.substr(0, colon));
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  if (parts.size() < 3 || parts.size() > 4)
    throw ConfigError("grid: expected start:stop:count[:log]");
  GridSpec spec;
  spec.start = parse_double("grid.start", parts[0]);
  spec.stop = parse_double("grid.stop", parts[1]);
  spec.count = static_cast<int>(parse_integer("grid.count", parts[2]));
  if (parts.size() == 4) {
    const std::string_view scale = trim(parts[3]);
    if (scale == "log")
      spec.log_scale = true;
    else if (scale != "linear")
      throw ConfigError("grid: scale must be 'linear' or 'log'");
  }
  return spec;
}

Eigen::ArrayXd make_grid(const GridSpec& spec) {
  if (spec.count < 1) throw ConfigError("sweep.count: must be >= 1");
  if (spec.count == 1) return Eigen::ArrayXd::Constant(1, spec.start);
  if (spec.log_scale) {
    if (!(spec.start > 0) || !(spec.stop > 0))
      throw ConfigError("sweep: log grids need positive endpoints");
    return Eigen::ArrayXd::LinSpaced(spec.count, std::log(spec.start),
                                     std::log(spec.stop))
        .exp();
  }
  return Eigen::ArrayXd::LinSpaced(spec.count, spec.start, spec.stop);
}

RunConfig default_config(Mode mode) {
  RunConfig config;
  config.mode = mode;
  config.output_path = std::string(to_string(mode)) + ".csv";

  const bool large_system = mode == Mode::simulate;
  const Eigen::Index companies = large_system ? 1000 : 50;
  const Eigen::Index students = large_system ? 10000 : 500;
  const int quota = large_system ? 30 : 10;
  config.market = MarketParams::homogeneous(companies, students, quota);

  switch (mode) {
    case Mode::simulate:
      config.market.horizon = 10000;
      break;
    case Mode::beveridge:
      config.market.horizon = 2000;
      config.sweep = GridSpec{0.5, 10.0, 20, false};
      break;
    case Mode::gamma_sweep:
      config.market.horizon = 2000;
      config.sweep = GridSpec{1.0, 30.0, 10, false};
      break;
    case Mode::coupled:
      // The reference coupled configuration: heavy mismatch feedback and
      // ten applications per student.
      config.market.horizon = 10000;
      config.market.mean_applications = 10.0;
      config.market.history_weights = Eigen::ArrayXd::Constant(1, 10.0);
      break;
    case Mode::neugart:
    case Mode::fit:
      break;
  }
  return config;
}

namespace {

void apply_market_section(RunConfig& config,
                          const std::map<std::string, std::string>& section) {
  MarketParams& market = config.market;
  bool quota_set = false, alpha_set = false;
  bool beta_set = false, beta_history_set = false;
  int quota = 0;
  double alpha = 0.0;
  for (const auto& [key, value] : section) {
    const std::string path = key_path("market", key);
    if (key == "K") market.companies = parse_integer(path, value);
    else if (key == "N") market.students = parse_integer(path, value);
    else if (key == "quota") { quota = static_cast<int>(parse_integer(path, value)); quota_set = true; }
    else if (key == "alpha") { alpha = parse_double(path, value); alpha_set = true; }
    else if (key == "a") market.mean_applications = parse_double(path, value);
    else if (key == "gamma") market.ranking_weight = parse_double(path, value);
    else if (key == "beta") {
      market.history_weights =
          Eigen::ArrayXd::Constant(1, parse_double(path, value));
      beta_set = true;
    } else if (key == "beta_history") {
      const auto values = parse_double_list(path, value);
      market.history_weights = Eigen::Map<const Eigen::ArrayXd>(
          values.data(), static_cast<Eigen::Index>(values.size()));
      beta_history_set = true;
    } else if (key == "horizon") market.horizon = parse_integer(path, value);
    else if (key == "burn_in") market.burn_in = parse_integer(path, value);
    else throw ConfigError("unknown key '" + path + "'");
  }
  if (beta_set && beta_history_set)
    throw ConfigError("market: give either beta or beta_history, not both");
  if (quota_set && alpha_set)
    throw ConfigError("market: give either quota or alpha, not both");
  if (quota_set) {
    if (quota < 1) throw ConfigError("market.quota: must be >= 1");
    market.quotas = Eigen::ArrayXi::Constant(market.companies, quota);
  } else if (alpha_set) {
    if (!(alpha > 0)) throw ConfigError("market.alpha: must be positive");
    const long long derived = std::llround(
        alpha * static_cast<double>(market.students) /
        static_cast<double>(market.companies));
    market.quotas = Eigen::ArrayXi::Constant(
        market.companies, static_cast<int>(std::max<long long>(1, derived)));
  } else {
    // Keep the default homogeneous quota if K changed.
    const int existing = market.quotas.size() > 0 ? market.quotas[0] : 1;
    market.quotas = Eigen::ArrayXi::Constant(market.companies, existing);
  }
}

void apply_macro_section(RunConfig& config,
                         const std::map<std::string, std::string>& section) {
  NeugartParams& macro = config.macro;
  for (const auto& [key, value] : section) {
    const std::string path = key_path("macro", key);
    if (key == "xi") macro.separation_rate = parse_double(path, value);
    else if (key == "d") macro.employed_search_share = parse_double(path, value);
    else if (key == "c1") macro.expectation_gain = parse_double(path, value);
    else if (key == "c2") macro.wage_rigidity = parse_double(path, value);
    else if (key == "mu") macro.base_wage_gap = parse_double(path, value);
    else if (key == "Gamma") macro.vacancy_response = parse_double(path, value);
    else if (key == "delta") macro.price_scale = parse_double(path, value);
    else if (key == "m") macro.money_growth = parse_double(path, value);
    else if (key == "Js") {
      if (trim(value) == "auto") {
        config.auto_job_openings = true;
      } else {
        macro.job_openings = parse_double(path, value);
        config.auto_job_openings = false;
      }
    } else if (key == "U0") {
      if (trim(value) == "auto") {
        config.auto_initial_unemployment = true;
      } else {
        config.initial_unemployment = parse_double(path, value);
        config.auto_initial_unemployment = false;
      }
    } else if (key == "pi0") config.initial_inflation = parse_double(path, value);
    else if (key == "horizon") config.macro_horizon = parse_integer(path, value);
    else if (key == "burn_in") config.macro_burn_in = parse_integer(path, value);
    else throw ConfigError("unknown key '" + path + "'");
  }
}

void apply_sweep_section(RunConfig& config,
                         const std::map<std::string, std::string>& section) {
  for (const auto& [key, value] : section) {
    const std::string path = key_path("sweep", key);
    if (key == "start") config.sweep.start = parse_double(path, value);
    else if (key == "stop") config.sweep.stop = parse_double(path, value);
    else if (key == "count")
      config.sweep.count = static_cast<int>(parse_integer(path, value));
    else if (key == "scale") {
      const auto scale = trim(value);
      if (scale == "log") config.sweep.log_scale = true;
      else if (scale == "linear") config.sweep.log_scale = false;
      else throw ConfigError(path + ": must be 'linear' or 'log'");
    } else throw ConfigError("unknown key '" + path + "'");
  }
}

void apply_fit_section(RunConfig& config,
                       const std::map<std::string, std::string>& section) {
  for (const auto& [key, value] : section) {
    const std::string path = key_path("fit", key);
    if (key == "input") config.fit_input = std::string(trim(value));
    else if (key == "b_min") {
      config.offset_lo = parse_double(path, value);
      config.offset_range_set = true;
    } else if (key == "b_max") {
      config.offset_hi = parse_double(path, value);
      config.offset_range_set = true;
    } else if (key == "grid_cells")
      config.offset_grid_cells = static_cast<int>(parse_integer(path, value));
    else throw ConfigError("unknown key '" + path + "'");
  }
}

}  // namespace

RunConfig parse_config(std::string_view text, Mode mode) {
  RunConfig config = default_config(mode);
  const RawConfig raw = lex_config(text);
  for (const auto& [section, entries] : raw) {
    if (section.empty()) {
      for (const auto& [key, value] : entries) {
        if (key == "mode") {
          if (mode_from_string(trim(value)) != mode)
            throw ConfigError("mode: config says '" + value +
                              "' but the subcommand is '" +
                              std::string(to_string(mode)) + "'");
        } else if (key == "seed") config.seed = parse_seed("seed", value);
        else if (key == "trials")
          config.trials = static_cast<int>(parse_integer("trials", value));
        else if (key == "threads")
          config.threads = static_cast<int>(parse_integer("threads", value));
        else if (key == "out") config.output_path = std::string(trim(value));
        else throw ConfigError("unknown key '" + key + "'");
      }
    } else if (section == "market") apply_market_section(config, entries);
    else if (section == "macro") apply_macro_section(config, entries);
    else if (section == "sweep") apply_sweep_section(config, entries);
    else if (section == "fit") apply_fit_section(config, entries);
    else throw ConfigError("unknown section '[" + section + "]'");
  }
  config.market.seed = config.seed;
  validate(config);
  return config;
}

void validate(const RunConfig& config) {
  if (config.trials < 1) throw ConfigError("trials: must be >= 1");
  if (config.threads < 0) throw ConfigError("threads: must be >= 0");
  if (config.output_path.empty()) throw ConfigError("out: must not be empty");
  if (config.mode != Mode::fit && config.mode != Mode::neugart) {
    try {
      laborsim::validate(config.market);
    } catch (const std::domain_error& e) {
      throw ConfigError(e.what());
    }
  }
  if (config.mode == Mode::neugart || config.mode == Mode::coupled) {
    try {
      laborsim::validate(config.macro);
    } catch (const std::domain_error& e) {
      throw ConfigError(e.what());
    }
  }
  if (config.mode == Mode::neugart) {
    if (config.macro_horizon < 1)
      throw ConfigError("macro.horizon: must be >= 1");
    if (config.macro_burn_in < 0 || config.macro_burn_in >= config.macro_horizon)
      throw ConfigError("macro.burn_in: must be in [0, horizon)");
    if (!config.auto_initial_unemployment &&
        (config.initial_unemployment < 0 || config.initial_unemployment > 1))
      throw ConfigError("macro.U0: must be in [0, 1]");
  }
  if (config.mode == Mode::beveridge || config.mode == Mode::gamma_sweep) {
    if (config.sweep.count < 1) throw ConfigError("sweep.count: must be >= 1");
    if (config.sweep.count > 1 && !(config.sweep.stop >= config.sweep.start))
      throw ConfigError("sweep: stop must be >= start");
  }
  if (config.offset_range_set && !(config.offset_lo < config.offset_hi))
    throw ConfigError("fit: b_min must be below b_max");
  if (config.offset_grid_cells < 1)
    throw ConfigError("fit.grid_cells: must be >= 1");
}

}  // namespace laborsim
