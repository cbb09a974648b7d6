#include "laborsim/runner.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "laborsim/observables.hpp"

namespace laborsim {

namespace {

// Shortest round-trip decimal form, identical bytes for identical values.
std::string format_number(double value) {
  if (!std::isfinite(value))
    throw std::runtime_error("output: refusing to write a non-finite value");
  std::array<char, 32> buffer;
  const auto [ptr, ec] =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ptr);
}

std::string format_number(long long value) { return std::to_string(value); }

class TableWriter {
 public:
  TableWriter(const std::filesystem::path& path, std::string_view header)
      : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path.string());
    out_ << header << '\n';
  }

  template <typename... Cells>
  void row(Cells... cells) {
    bool first = true;
    ((out_ << (first ? "" : ","), first = false, out_ << format_number(cells)),
     ...);
    out_ << '\n';
    ++rows_;
  }

  long rows() const { return rows_; }

  void close() {
    out_.close();
    if (!out_)
      throw std::runtime_error("failed writing output file: " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  long rows_ = 0;
};

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

void write_market_metadata(std::ostream& out, const MarketParams& m) {
  out << "[market]\n";
  out << "K = " << m.companies << '\n';
  out << "N = " << m.students << '\n';
  if (m.quotas.size() > 0 && (m.quotas == m.quotas[0]).all())
    out << "quota = " << m.quotas[0] << '\n';
  else
    out << "quota = heterogeneous\n";
  out << "a = " << format_number(m.mean_applications) << '\n';
  out << "gamma = " << format_number(m.ranking_weight) << '\n';
  out << "beta_history =";
  for (Eigen::Index l = 0; l < m.history_weights.size(); ++l)
    out << (l ? "," : " ") << format_number(m.history_weights[l]);
  out << '\n';
  out << "horizon = " << m.horizon << '\n';
  out << "burn_in = " << m.burn_in << '\n';
  out << "V = " << m.total_vacancies() << '\n';
  out << "alpha = " << format_number(m.job_offer_ratio()) << '\n';
}

void write_macro_metadata(std::ostream& out, const RunConfig& config) {
  const NeugartParams& p = config.macro;
  out << "[macro]\n";
  out << "xi = " << format_number(p.separation_rate) << '\n';
  out << "d = " << format_number(p.employed_search_share) << '\n';
  out << "c1 = " << format_number(p.expectation_gain) << '\n';
  out << "c2 = " << format_number(p.wage_rigidity) << '\n';
  out << "mu = " << format_number(p.base_wage_gap) << '\n';
  out << "Gamma = " << format_number(p.vacancy_response) << '\n';
  out << "delta = " << format_number(p.price_scale) << '\n';
  out << "m = " << format_number(p.money_growth) << '\n';
  out << "Js = " << format_number(p.job_openings)
      << (config.auto_job_openings ? " ; auto" : "") << '\n';
  out << "pi0 = " << format_number(config.initial_inflation) << '\n';
  try {
    const MacroFixedPoint fp = fixed_point(p);
    out << "U_star = " << format_number(fp.unemployment) << '\n';
    out << "pi_star = " << format_number(fp.inflation) << '\n';
    out << "Js_star = "
        << format_number(stationary_job_openings(p, fp.unemployment)) << '\n';
  } catch (const std::domain_error&) {
    out << "U_star = undefined\n";
  }
}

void write_metadata(const RunConfig& config, const std::filesystem::path& path,
                    long rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open metadata file: " + path.string());
  out << "[run]\n";
  out << "tool = " << kToolVersion << '\n';
  out << "created = " << timestamp_utc() << '\n';
  out << "mode = " << to_string(config.mode) << '\n';
  out << "seed = " << config.seed << '\n';
  out << "trials = " << config.trials << '\n';
  out << "rows = " << rows << '\n';
  switch (config.mode) {
    case Mode::simulate:
      write_market_metadata(out, config.market);
      break;
    case Mode::beveridge:
    case Mode::gamma_sweep:
      write_market_metadata(out, config.market);
      out << "[sweep]\n";
      out << "start = " << format_number(config.sweep.start) << '\n';
      out << "stop = " << format_number(config.sweep.stop) << '\n';
      out << "count = " << config.sweep.count << '\n';
      out << "scale = " << (config.sweep.log_scale ? "log" : "linear") << '\n';
      break;
    case Mode::neugart:
      write_macro_metadata(out, config);
      out << "horizon = " << config.macro_horizon << '\n';
      out << "burn_in = " << config.macro_burn_in << '\n';
      break;
    case Mode::coupled:
      write_market_metadata(out, config.market);
      write_macro_metadata(out, config);
      break;
    case Mode::fit:
      out << "[fit]\n";
      out << "input = " << config.fit_input << '\n';
      break;
  }
  out.close();
  if (!out)
    throw std::runtime_error("failed writing metadata file: " + path.string());
}

// Resolves Js (and the neugart-mode initial state) from the fixed point
// when the config asked for automatic values.
RunConfig resolve_macro(RunConfig config) {
  if (config.mode != Mode::neugart && config.mode != Mode::coupled)
    return config;
  if (config.auto_job_openings) {
    const MacroFixedPoint fp = fixed_point(config.macro);
    config.macro.job_openings =
        stationary_job_openings(config.macro, fp.unemployment);
  }
  if (config.mode == Mode::neugart && config.auto_initial_unemployment) {
    const MacroFixedPoint fp = fixed_point(config.macro);
    config.initial_unemployment = std::min(1.0, fp.unemployment + 0.05);
  }
  return config;
}

long run_simulate(const RunConfig& config, TableWriter& table) {
  MarketParams params = config.market;
  params.seed = config.seed;
  const SeriesObservables series = run_market(params);
  for (long t = 0; t < params.horizon; ++t)
    table.row(static_cast<long long>(t), series.unemployment[t]);
  return table.rows();
}

long run_sweep(const RunConfig& config, TableWriter& table) {
  const Eigen::ArrayXd grid = make_grid(config.sweep);
  MarketParams base = config.market;
  base.seed = config.seed;
  const SweepResult result =
      config.mode == Mode::beveridge
          ? beveridge_sweep(base, grid, config.trials, config.threads)
          : gamma_sweep(base, grid, config.trials, config.threads);
  for (Eigen::Index c = 0; c < grid.size(); ++c)
    table.row(result.grid[c], result.employment_mean[c],
              result.employment_stderr[c],
              static_cast<long long>(result.trials));
  return table.rows();
}

long run_neugart(const RunConfig& config, TableWriter& table) {
  MacroState initial;
  initial.unemployment = config.initial_unemployment;
  initial.inflation = config.initial_inflation;
  initial.expected_inflation = config.initial_inflation;
  const MacroTrajectory trajectory =
      run_macro(config.macro, initial, config.macro_horizon);
  for (long t = config.macro_burn_in; t < config.macro_horizon; ++t)
    table.row(static_cast<long long>(t + 1), trajectory.points(t, 0),
              trajectory.points(t, 1));
  return table.rows();
}

long run_coupled(const RunConfig& config, TableWriter& table) {
  MarketParams market = config.market;
  market.seed = config.seed;
  const Eigen::ArrayX2d points =
      coupled_run(market, config.macro, config.initial_inflation);
  for (long t = 0; t < points.rows(); ++t)
    table.row(static_cast<long long>(t), points(t, 0), points(t, 1));
  return table.rows();
}

long run_fit(const RunConfig& config, TableWriter& table) {
  const CurvePoints points = read_curve_points(config.fit_input);
  const FitResult fit =
      config.offset_range_set
          ? fit_offset_power_law(points, config.offset_lo, config.offset_hi,
                                 config.offset_grid_cells)
          : fit_offset_power_law(points);
  table.row(fit.offset, fit.exponent, fit.log_amplitude, fit.sse,
            static_cast<long long>(fit.points_used));
  return table.rows();
}

}  // namespace

CurvePoints read_curve_points(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("fit: cannot open input file: " + path.string());
  std::vector<std::array<double, 2>> rows;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    for (char& c : line)
      if (c == ',' || c == '\t' || c == ';') c = ' ';
    std::istringstream fields(line);
    std::vector<double> numbers;
    std::string token;
    bool numeric = true;
    while (fields >> token) {
      if (token.front() == '#') break;
      char* end = nullptr;
      const double value = std::strtod(token.c_str(), &end);
      if (end != token.c_str() + token.size()) {
        numeric = false;
        break;
      }
      numbers.push_back(value);
    }
    if (!numeric || numbers.empty()) continue;  // header or comment line
    if (numbers.size() == 2) rows.push_back({numbers[0], numbers[1]});
    else if (numbers.size() == 3) rows.push_back({numbers[1], numbers[2]});
    else
      throw std::domain_error("fit input line " + std::to_string(line_number) +
                              ": expected 2 or 3 numeric columns");
  }
  if (rows.empty())
    throw std::domain_error("fit input has no numeric (U, pi) rows: " +
                            path.string());
  CurvePoints points(static_cast<Eigen::Index>(rows.size()), 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    points(static_cast<Eigen::Index>(i), 0) = rows[i][0];
    points(static_cast<Eigen::Index>(i), 1) = rows[i][1];
  }
  return points;
}

RunArtifacts execute(const RunConfig& raw_config) {
  validate(raw_config);
  if (raw_config.mode == Mode::fit && raw_config.fit_input.empty())
    throw ConfigError("fit: no input file given");
  const RunConfig config = resolve_macro(raw_config);

  RunArtifacts artifacts;
  artifacts.table = config.output_path;
  artifacts.metadata = config.output_path + ".meta";

  std::string_view header;
  switch (config.mode) {
    case Mode::simulate: header = "t,U_t"; break;
    case Mode::beveridge: header = "alpha,employment_mean,employment_stderr,trials"; break;
    case Mode::gamma_sweep: header = "gamma,employment_mean,employment_stderr,trials"; break;
    case Mode::neugart:
    case Mode::coupled: header = "t,U,pi"; break;
    case Mode::fit: header = "b,c,logC,sse,n"; break;
  }

  TableWriter table(artifacts.table, header);
  long rows = 0;
  switch (config.mode) {
    case Mode::simulate: rows = run_simulate(config, table); break;
    case Mode::beveridge:
    case Mode::gamma_sweep: rows = run_sweep(config, table); break;
    case Mode::neugart: rows = run_neugart(config, table); break;
    case Mode::coupled: rows = run_coupled(config, table); break;
    case Mode::fit: rows = run_fit(config, table); break;
  }
  table.close();
  write_metadata(config, artifacts.metadata, rows);
  return artifacts;
}

}  // namespace laborsim
