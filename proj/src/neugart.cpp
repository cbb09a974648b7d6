#include "laborsim/neugart.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace laborsim {

void validate(const NeugartParams& p) {
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(p.separation_rate))
    throw std::domain_error("macro: separation_rate must be in [0, 1]");
  if (!in_unit(p.employed_search_share))
    throw std::domain_error("macro: employed_search_share must be in [0, 1]");
  if (!in_unit(p.expectation_gain))
    throw std::domain_error("macro: expectation_gain must be in [0, 1]");
  if (!in_unit(p.wage_rigidity))
    throw std::domain_error("macro: wage_rigidity must be in [0, 1]");
  if (!(p.base_wage_gap > 0.0) || !(p.base_wage_gap < 1.0))
    throw std::domain_error("macro: base_wage_gap must be in (0, 1)");
  if (!(p.vacancy_response >= 0.0))
    throw std::domain_error("macro: vacancy_response must be >= 0");
  if (p.price_scale == 0.0)
    throw std::domain_error("macro: price_scale must be nonzero");
  if (!(p.job_openings >= 0.0))
    throw std::domain_error("macro: job_openings must be >= 0");
  if (!std::isfinite(p.money_growth))
    throw std::domain_error("macro: money_growth must be finite");
}

double job_finding_rate(double unemployment, double inflation,
                        const NeugartParams& p) {
  const double searchers =
      unemployment + p.employed_search_share * (1.0 - unemployment);
  if (!(searchers > 0.0))
    throw std::domain_error("job_finding_rate: no job searchers");
  return (p.job_openings + p.vacancy_response * (p.money_growth - inflation)) /
         searchers;
}

double inflation_step(double unemployment, double inflation,
                      const NeugartParams& p) {
  const double wage_pressure =
      (p.base_wage_gap - (1.0 - p.wage_rigidity) * unemployment) /
      (1.0 - p.base_wage_gap);
  const double projected_unemployment =
      unemployment + p.separation_rate * (1.0 - unemployment) -
      unemployment * job_finding_rate(unemployment, inflation, p);
  return (p.base_wage_gap / (1.0 - p.base_wage_gap) +
          p.expectation_gain * inflation +
          (1.0 - p.expectation_gain) * (p.price_scale * inflation - wage_pressure) -
          (1.0 - p.wage_rigidity) / (1.0 - p.base_wage_gap) *
              projected_unemployment) /
         p.price_scale;
}

MacroState macro_step(const MacroState& s, const NeugartParams& p,
                      bool* clamped) {
  const double finding = job_finding_rate(s.unemployment, s.inflation, p);
  const double raw_unemployment = s.unemployment +
                                  p.separation_rate * (1.0 - s.unemployment) -
                                  s.unemployment * finding;
  MacroState next;
  next.inflation = inflation_step(s.unemployment, s.inflation, p);
  next.expected_inflation = p.expectation_gain * s.inflation +
                            (1.0 - p.expectation_gain) * s.expected_inflation;
  next.unemployment = std::clamp(raw_unemployment, 0.0, 1.0);
  if (clamped) *clamped = next.unemployment != raw_unemployment;
  return next;
}

MacroFixedPoint fixed_point(const NeugartParams& p) {
  const double slope = 1.0 - p.wage_rigidity;
  if (std::abs(slope) < 1e-15)
    throw std::domain_error("fixed_point: wage_rigidity = 1 leaves no fixed point");
  MacroFixedPoint fp;
  fp.inflation = p.money_growth;
  fp.unemployment = (p.base_wage_gap - p.money_growth * (p.price_scale - 1.0) *
                                           (1.0 - p.base_wage_gap)) /
                    slope;
  if (!(fp.unemployment > 0.0) || !(fp.unemployment < 1.0))
    throw std::domain_error("fixed_point: stationary unemployment outside (0, 1)");
  return fp;
}

double stationary_job_openings(const NeugartParams& p, double u_star) {
  if (!(u_star > 0.0) || !(u_star < 1.0))
    throw std::domain_error("stationary_job_openings: U* must be in (0, 1)");
  return p.separation_rate * (1.0 - u_star) *
         (u_star + p.employed_search_share * (1.0 - u_star)) / u_star;
}

MacroTrajectory run_macro(const NeugartParams& params, const MacroState& initial,
                          long steps) {
  validate(params);
  if (steps < 1) throw std::domain_error("run_macro: steps must be >= 1");
  MacroTrajectory trajectory;
  trajectory.points.resize(steps, 2);
  MacroState state = initial;
  bool clamped = false;
  for (long t = 0; t < steps; ++t) {
    state = macro_step(state, params, &clamped);
    trajectory.clamp_events += clamped ? 1 : 0;
    trajectory.points(t, 0) = state.unemployment;
    trajectory.points(t, 1) = state.inflation;
  }
  trajectory.final_state = state;
  return trajectory;
}

Eigen::ArrayX2d coupled_run(const MarketParams& market,
                            const NeugartParams& macro,
                            double initial_inflation) {
  validate(market);
  validate(macro);
  Eigen::ArrayX2d points(market.horizon, 2);
  MarketState state = make_initial_state(market);
  double inflation = initial_inflation;
  for (long t = 0; t < market.horizon; ++t) {
    const YearOutcome outcome = step(state, market);
    inflation = inflation_step(outcome.unemployment, inflation, macro);
    points(t, 0) = outcome.unemployment;
    points(t, 1) = inflation;
  }
  return points;
}

}  // namespace laborsim
