#pragma once

#include <filesystem>
#include <string>

#include "laborsim/config.hpp"
#include "laborsim/philips_fit.hpp"

namespace laborsim {

struct RunArtifacts {
  std::filesystem::path table;     // comma-separated data with one header row
  std::filesystem::path metadata;  // sidecar with config echo and derived values
};

// Runs the configured mode and writes the data table plus its metadata
// sidecar ("<out>.meta"). Identical configs produce byte-identical tables;
// sweep modes parallelize over cells without affecting the output.
RunArtifacts execute(const RunConfig& config);

// Reads delimiter-separated (U, pi) text for the fit mode. Accepts two
// numeric columns (U, pi) or three (t, U, pi, as written by the simulate,
// neugart and coupled modes); non-numeric lines such as headers are
// skipped.
CurvePoints read_curve_points(const std::filesystem::path& path);

}  // namespace laborsim
