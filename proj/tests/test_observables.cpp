#include <doctest.h>

#include <cmath>
#include <vector>

#include "laborsim/observables.hpp"

using namespace laborsim;

TEST_CASE("unemployment rate counts students without acceptances") {
  Eigen::ArrayXi s(4);
  s << 0, 1, 2, 0;
  CHECK(unemployment_rate(s) == 0.5);
  s << 1, 1, 3, 2;
  CHECK(unemployment_rate(s) == 0.0);
  s << 0, 0, 0, 0;
  CHECK(unemployment_rate(s) == 1.0);
}

TEST_CASE("order parameter is the post-burn-in mean") {
  CHECK(order_parameter(Eigen::ArrayXd::Constant(10, 0.5), 0) == 0.5);

  Eigen::ArrayXd alternating(8);
  alternating << 0, 1, 0, 1, 0, 1, 0, 1;
  CHECK(order_parameter(alternating, 0) == 0.5);

  Eigen::ArrayXd series(4);
  series << 1.0, 0.2, 0.2, 0.2;
  CHECK(order_parameter(series, 1) == doctest::Approx(0.2).epsilon(1e-15));

  CHECK_THROWS_AS(order_parameter(series, 4), std::domain_error);
}

TEST_CASE("empirical distribution normalizes observed frequencies") {
  const std::vector<int> values = {1, 1, 2};
  const Histogram h = empirical_distribution(std::span<const int>(values));
  REQUIRE(h.support.size() == 2);
  CHECK(h.support[0] == 1);
  CHECK(h.support[1] == 2);
  CHECK(h.mass[0] == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(h.mass[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));

  const std::vector<int> constant(17, 42);
  const Histogram unit = empirical_distribution(std::span<const int>(constant));
  REQUIRE(unit.support.size() == 1);
  CHECK(unit.mass[0] == 1.0);

  Rng rng(5);
  std::vector<int> random(500);
  for (auto& v : random) v = static_cast<int>(rng.below(13));
  const Histogram r = empirical_distribution(std::span<const int>(random));
  CHECK(std::abs(r.mass.sum() - 1.0) < 1e-9);
  CHECK((r.mass >= 0).all());
}

TEST_CASE("thermodynamic selection probability") {
  for (Eigen::Index k : {1, 250, 999})
    CHECK(thermodynamic_selection_probability(k, 1000, 0.0) ==
          doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(thermodynamic_selection_probability(1000, 1000, 1.0) ==
        doctest::Approx(0.0013333333333333333).epsilon(1e-12));
  // For the bottom company the (gamma+1)/2^(gamma+1)K shorthand becomes
  // accurate once gamma is moderately large.
  const double k1 = thermodynamic_selection_probability(1, 1000000, 10.0);
  CHECK(k1 == doctest::Approx(11.0 / std::exp2(11.0) / 1000000).epsilon(2e-3));
}

TEST_CASE("empty-company probabilities") {
  CHECK(empty_company_probability(1, 10000, 1000, 1.0, RankEnd::highest) ==
        doctest::Approx(4.5399929762484854e-05).epsilon(1e-12));
  CHECK(empty_company_probability(1, 10000, 1000, 1.0, RankEnd::lowest) ==
        doctest::Approx(0.006737946999085467).epsilon(1e-12));
  // Limits: the bottom company surely empties, the top one never does.
  CHECK(empty_company_probability(1, 10000, 1000, 1e9, RankEnd::lowest) == 1.0);
  CHECK(empty_company_probability(1, 10000, 1000, 1e9, RankEnd::highest) == 0.0);
  // And the lowest-rank probability grows with the ranking weight.
  double previous = 0.0;
  for (double gamma : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double p = empty_company_probability(1, 10000, 1000, gamma, RankEnd::lowest);
    CHECK(p > previous);
    previous = p;
  }
}

TEST_CASE("residual employment floor") {
  CHECK(residual_employment(10, 500) == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(residual_employment(0, 500) == 0.0);
  CHECK(residual_employment(500, 500) == 1.0);
  CHECK_THROWS_AS(residual_employment(501, 500), std::domain_error);
}

namespace {

MarketParams small_market() {
  MarketParams params = MarketParams::homogeneous(10, 50, 2);
  params.horizon = 120;
  params.burn_in = 20;
  params.seed = 42;
  return params;
}

}  // namespace

TEST_CASE("degenerate sweeps equal a direct run") {
  const MarketParams base = small_market();

  SUBCASE("gamma") {
    Eigen::ArrayXd grid(1);
    grid << 1.5;
    const SweepResult sweep = gamma_sweep(base, grid, 1);
    MarketParams direct = base;
    direct.ranking_weight = 1.5;
    direct.seed = derive_seed(base.seed, kGammaSweepDomain, 0, 0);
    const double employment =
        1.0 - order_parameter(run_market(direct).unemployment, direct.burn_in);
    CHECK(sweep.employment_mean[0] == employment);
    CHECK(sweep.employment_stderr[0] == 0.0);
  }

  SUBCASE("beveridge") {
    Eigen::ArrayXd grid(1);
    grid << 2.0;
    const SweepResult sweep = beveridge_sweep(base, grid, 1);
    MarketParams direct = base;
    direct.quotas.setConstant(10);  // alpha 2 at N=50, K=10
    direct.seed = derive_seed(base.seed, kBeveridgeDomain, 0, 0);
    const double employment =
        1.0 - order_parameter(run_market(direct).unemployment, direct.burn_in);
    CHECK(sweep.employment_mean[0] == employment);
  }
}

TEST_CASE("sweep results do not depend on the thread count") {
  const MarketParams base = small_market();
  Eigen::ArrayXd grid(3);
  grid << 0.5, 2.0, 8.0;
  const SweepResult serial = gamma_sweep(base, grid, 3, 1);
  const SweepResult parallel = gamma_sweep(base, grid, 3, 4);
  CHECK((serial.employment_mean == parallel.employment_mean).all());
  CHECK((serial.employment_stderr == parallel.employment_stderr).all());

  const SweepResult b_serial = beveridge_sweep(base, grid, 2, 1);
  const SweepResult b_parallel = beveridge_sweep(base, grid, 2, 8);
  CHECK((b_serial.employment_mean == b_parallel.employment_mean).all());
}

TEST_CASE("gamma = 0 is statistically a uniform-choice market") {
  MarketParams base = MarketParams::homogeneous(20, 200, 3);
  base.mean_applications = 2.0;
  base.history_weights = Eigen::ArrayXd::Constant(1, 1.0);
  base.horizon = 400;
  base.seed = 7;

  Eigen::ArrayXd grid(1);
  grid << 0.0;
  const int trials = 5;
  const SweepResult sweep = gamma_sweep(base, grid, trials);

  // Reference: the same market with the ranking and feedback switched off,
  // so every company draws with probability 1/K each year.
  Eigen::ArrayXd employment(trials);
  for (int trial = 0; trial < trials; ++trial) {
    MarketParams uniform = base;
    uniform.ranking_weight = 0.0;
    uniform.history_weights = Eigen::ArrayXd::Zero(1);
    uniform.seed = derive_seed(base.seed ^ 0xfeed, kSimulateDomain, 0,
                               static_cast<std::uint64_t>(trial));
    employment[trial] =
        1.0 - order_parameter(run_market(uniform).unemployment, uniform.burn_in);
  }
  const double reference_mean = employment.mean();
  const double reference_var =
      (employment - reference_mean).square().sum() / (trials - 1.0);
  const double reference_stderr = std::sqrt(reference_var / trials);

  const double combined = std::sqrt(
      sweep.employment_stderr[0] * sweep.employment_stderr[0] +
      reference_stderr * reference_stderr);
  CHECK(std::abs(sweep.employment_mean[0] - reference_mean) < 3 * combined);
}

TEST_CASE("empty-company fraction matches the per-company estimate when beta = 0") {
  MarketParams params = MarketParams::homogeneous(100, 1000, 5);
  params.ranking_weight = 5.0;
  params.history_weights = Eigen::ArrayXd::Zero(1);
  params.mean_applications = 1.0;
  params.horizon = 400;
  params.seed = 11;

  RecordOptions record;
  record.sheet_counts = true;
  const SeriesObservables series = run_market(params, record);

  Eigen::ArrayXd yearly_fraction(params.horizon);
  for (long t = 0; t < params.horizon; ++t)
    yearly_fraction[t] =
        static_cast<double>((series.sheet_counts.row(t) == 0).count()) /
        static_cast<double>(params.companies);

  const Eigen::ArrayXd probabilities = selection_probabilities(
      (-params.ranking_weight) * ranking_factors(params.companies).log());
  const double estimate =
      (-static_cast<double>(params.students) *
       (probabilities * params.mean_applications).min(1.0))
          .exp()
          .mean();

  const double mean = yearly_fraction.mean();
  const double standard_error =
      std::sqrt((yearly_fraction - mean).square().sum() /
                (params.horizon - 1.0) / params.horizon);
  CHECK(std::abs(mean - estimate) < 3 * standard_error);
}
