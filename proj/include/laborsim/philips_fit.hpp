#pragma once

#include <Eigen/Dense>

namespace laborsim {

// (U, pi) point set for Philips-curve fitting. Column 0 holds U, column 1
// holds pi. Fitting happens on (log U, log(pi + b)), so U must be positive.
using CurvePoints = Eigen::ArrayX2d;

struct LinearFit {
  double exponent = 0.0;       // c, positive for downward-sloping curves
  double log_amplitude = 0.0;  // log C, intercept of the line
  double sse = 0.0;            // residual sum of squares in log space
};

// Ordinary least squares of log(pi + b) on log U for a fixed offset b.
// The fitted line is log(pi + b) = log C - c log U.
LinearFit linear_fit_given_b(const Eigen::Ref<const CurvePoints>& points,
                             double offset);

struct FitResult {
  double offset = 0.0;         // b
  double exponent = 0.0;       // c
  double log_amplitude = 0.0;  // log C
  double sse = 0.0;
  Eigen::Index points_used = 0;
  Eigen::Index points_dropped = 0;  // rows removed for U <= 0
};

// Fit pi + b proportional to U^-c by searching the offset: a coarse grid
// over [offset_lo, offset_hi] guards against local minima, then golden
// section refines around the best cell. The reported offset never scores
// worse than any grid point. Rows with U <= 0 are dropped and counted.
FitResult fit_offset_power_law(const Eigen::Ref<const CurvePoints>& points,
                               double offset_lo, double offset_hi,
                               int grid_cells = 200);

// Same, with the default search interval (-min pi + 1e-6, -min pi + 10].
FitResult fit_offset_power_law(const Eigen::Ref<const CurvePoints>& points);

}  // namespace laborsim
