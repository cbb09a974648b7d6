#include "laborsim/philips_fit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace laborsim {

LinearFit linear_fit_given_b(const Eigen::Ref<const CurvePoints>& points,
                             double offset) {
  const Eigen::Index n = points.rows();
  if (n < 2) throw std::domain_error("linear_fit_given_b: need at least 2 points");
  if ((points.col(0) <= 0).any())
    throw std::domain_error("linear_fit_given_b: U must be positive");
  if (((points.col(1) + offset) <= 0).any())
    throw std::domain_error("linear_fit_given_b: pi + b must be positive");

  const Eigen::ArrayXd x = points.col(0).log();
  const Eigen::ArrayXd y = (points.col(1) + offset).log();
  const double x_mean = x.mean();
  const double y_mean = y.mean();
  const Eigen::ArrayXd dx = x - x_mean;
  const double sxx = dx.square().sum();
  if (!(sxx > 0))
    throw std::domain_error("linear_fit_given_b: all U values coincide");
  const double slope = (dx * (y - y_mean)).sum() / sxx;

  LinearFit fit;
  fit.exponent = -slope;
  fit.log_amplitude = y_mean - slope * x_mean;
  fit.sse = (y - (fit.log_amplitude + slope * x)).square().sum();
  return fit;
}

namespace {

CurvePoints drop_nonpositive_u(const Eigen::Ref<const CurvePoints>& points,
                               Eigen::Index& dropped) {
  const Eigen::Index n = points.rows();
  CurvePoints kept(n, 2);
  Eigen::Index used = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(points(i, 0)) || !std::isfinite(points(i, 1)))
      throw std::domain_error("fit_offset_power_law: non-finite point");
    if (points(i, 0) > 0) kept.row(used++) = points.row(i);
  }
  dropped = n - used;
  return kept.topRows(used);
}

}  // namespace

FitResult fit_offset_power_law(const Eigen::Ref<const CurvePoints>& points,
                               double offset_lo, double offset_hi,
                               int grid_cells) {
  Eigen::Index dropped = 0;
  const CurvePoints data = drop_nonpositive_u(points, dropped);
  if (data.rows() < 3)
    throw std::domain_error("fit_offset_power_law: need at least 3 usable points");
  if (grid_cells < 1)
    throw std::domain_error("fit_offset_power_law: grid_cells must be >= 1");

  // Only offsets with pi + b > 0 everywhere are feasible.
  const double feasible_lo = -data.col(1).minCoeff();
  double lo = std::max(offset_lo,
                       feasible_lo + 1e-12 * std::max(1.0, std::abs(feasible_lo)));
  const double hi = offset_hi;
  if (!(lo < hi))
    throw std::domain_error("fit_offset_power_law: empty feasible offset interval");

  double best_offset = std::numeric_limits<double>::quiet_NaN();
  double best_sse = std::numeric_limits<double>::infinity();
  auto score = [&](double b) {
    const double sse = linear_fit_given_b(data, b).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best_offset = b;
    }
    return sse;
  };

  // Coarse scan, then keep a bracket of one cell on each side of the best.
  const double cell = (hi - lo) / grid_cells;
  int best_index = 0;
  for (int i = 0; i <= grid_cells; ++i) {
    const double b = lo + cell * i;
    const double previous_best = best_sse;
    if (score(b) < previous_best) best_index = i;
  }
  double a = lo + cell * std::max(0, best_index - 1);
  double b = lo + cell * std::min(grid_cells, best_index + 1);

  // Golden-section refinement inside the bracket.
  constexpr double inv_phi = 0.6180339887498949;
  const double tolerance = 1e-11 * std::max(1.0, std::abs(best_offset));
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = score(x1);
  double f2 = score(x2);
  while (b - a > tolerance) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = score(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = score(x2);
    }
  }

  const LinearFit line = linear_fit_given_b(data, best_offset);
  FitResult result;
  result.offset = best_offset;
  result.exponent = line.exponent;
  result.log_amplitude = line.log_amplitude;
  result.sse = line.sse;
  result.points_used = data.rows();
  result.points_dropped = dropped;
  return result;
}

FitResult fit_offset_power_law(const Eigen::Ref<const CurvePoints>& points) {
  Eigen::Index dropped = 0;
  const CurvePoints data = drop_nonpositive_u(points, dropped);
  if (data.rows() < 1)
    throw std::domain_error("fit_offset_power_law: no usable points");
  const double min_pi = data.col(1).minCoeff();
  return fit_offset_power_law(points, -min_pi + 1e-6, -min_pi + 10.0);
}

}  // namespace laborsim
