#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "laborsim/market.hpp"
#include "laborsim/neugart.hpp"

namespace laborsim {

inline constexpr std::string_view kToolVersion = "laborsim 0.1.0";

// Configuration problems: unknown keys, missing files, out-of-range values.
// The CLI maps these to exit code 2 (runtime failures map to 3).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Mode { simulate, beveridge, gamma_sweep, neugart, coupled, fit };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view name);

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
  bool log_scale = false;
};

// Parses "start:stop:count[:log]".
GridSpec parse_grid_spec(std::string_view text);

// Materializes the grid (geometric spacing when log_scale is set).
Eigen::ArrayXd make_grid(const GridSpec& spec);

// A fully resolved run: mode, parameters, grid, output location.
struct RunConfig {
  Mode mode = Mode::simulate;
  std::uint64_t seed = 1;
  int trials = 5;
  int threads = 0;  // 0 = hardware concurrency
  std::string output_path;

  MarketParams market;

  NeugartParams macro;
  bool auto_job_openings = true;       // Js = J_s* from the fixed point
  bool auto_initial_unemployment = true;  // U0 = U* + 0.05
  double initial_unemployment = 0.0;
  double initial_inflation = 0.0;      // pi0; pi_e starts equal to pi0
  long macro_horizon = 100000;
  long macro_burn_in = 1000;

  GridSpec sweep;

  std::string fit_input;
  bool offset_range_set = false;
  double offset_lo = 0.0;
  double offset_hi = 0.0;
  int offset_grid_cells = 200;
};

// Mode-specific defaults: simulate uses the large reference system
// (K=1000, N=10000, quota 30, horizon 1e4); sweep and coupled modes use
// the small one (K=50, N=500, quota 10).
RunConfig default_config(Mode mode);

// Parses an INI-style config (key = value lines grouped under [market],
// [macro], [sweep], [fit]; top-level keys mode/seed/out/trials/threads)
// on top of the mode defaults. Unknown keys or bad values raise
// ConfigError naming the offending key.
RunConfig parse_config(std::string_view text, Mode mode);

// Validates cross-field constraints; throws ConfigError.
void validate(const RunConfig& config);

}  // namespace laborsim
