#include <doctest.h>

#include <cmath>
#include <numeric>

#include "laborsim/market.hpp"
#include "laborsim/observables.hpp"
#include "oracles.hpp"

using namespace laborsim;

TEST_CASE("ranking factor matches its closed form") {
  CHECK(ranking_factor(7, 7) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ranking_factor(1, 1000) == doctest::Approx(1.001).epsilon(1e-15));
  CHECK(ranking_factor(500, 1000) == doctest::Approx(1.5).epsilon(1e-15));
  for (Eigen::Index k = 2; k <= 50; ++k)
    CHECK(ranking_factor(k, 50) > ranking_factor(k - 1, 50));
  CHECK_THROWS_AS(ranking_factor(0, 10), std::domain_error);
  CHECK_THROWS_AS(ranking_factor(11, 10), std::domain_error);

  const Eigen::ArrayXd all = ranking_factors(1000);
  CHECK(all[0] == doctest::Approx(1.001).epsilon(1e-15));
  CHECK(all[999] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("mismatch is the quota gap over total vacancies") {
  CHECK(mismatch(30, 30, 30000) == 0.0);
  CHECK(mismatch(30, 60, 30000) == doctest::Approx(0.001).epsilon(1e-15));
  CHECK(mismatch(10, 0, 500) == doctest::Approx(0.02).epsilon(1e-15));
  CHECK_THROWS_AS(mismatch(10, 5, 0), std::domain_error);
}

TEST_CASE("local energy combines ranking and mismatch history") {
  Eigen::ArrayXd h(1), beta(1);
  h << 0.0;
  beta << 1.0;
  CHECK(local_energy(2.0, h, beta, 0.0) == 0.0);
  CHECK(local_energy(2.0, h, beta, 1.0) ==
        doctest::Approx(-0.6931471805599453).epsilon(1e-12));

  Eigen::ArrayXd h2(2), beta2(2);
  h2 << 0.1, 0.2;
  beta2 << 1.0, 0.5;
  CHECK(local_energy(1.5, h2, beta2, 2.0) ==
        doctest::Approx(-0.6109302162163288).epsilon(1e-12));

  CHECK_THROWS_AS(local_energy(1.5, h2, beta, 1.0), std::domain_error);
}

TEST_CASE("selection probabilities form a softmax over negative energies") {
  SUBCASE("equal energies give the uniform distribution") {
    const Eigen::ArrayXd p = selection_probabilities(Eigen::ArrayXd::Constant(7, 3.25));
    for (Eigen::Index k = 0; k < 7; ++k)
      CHECK(p[k] == doctest::Approx(1.0 / 7).epsilon(1e-14));
  }

  SUBCASE("two companies, ranking only, gamma = 1") {
    Eigen::ArrayXd energies(2);
    energies << -std::log(1.5), -std::log(2.0);
    const Eigen::ArrayXd p = selection_probabilities(energies);
    CHECK(p[0] == doctest::Approx(1.5 / 3.5).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(2.0 / 3.5).epsilon(1e-14));
  }

  SUBCASE("adding a constant to all energies changes nothing") {
    Rng rng(99);
    Eigen::ArrayXd energies(40);
    for (Eigen::Index k = 0; k < energies.size(); ++k)
      energies[k] = 10.0 * rng.uniform01() - 5.0;
    const Eigen::ArrayXd base = selection_probabilities(energies);
    const Eigen::ArrayXd shifted = selection_probabilities(energies + 123.456);
    CHECK(((base - shifted).abs().maxCoeff()) < 1e-12);
    CHECK(std::abs(base.sum() - 1.0) < 1e-12);
  }

  SUBCASE("with no history the distribution is the normalized ranking power") {
    for (double gamma : {0.0, 0.5, 3.7, 20.0}) {
      const Eigen::ArrayXd ranks = ranking_factors(137);
      const Eigen::ArrayXd p = selection_probabilities((-gamma) * ranks.log());
      const Eigen::ArrayXd direct = ranks.pow(gamma) / ranks.pow(gamma).sum();
      CHECK(((p - direct).abs() / direct).maxCoeff() < 1e-10);
    }
  }

  SUBCASE("error paths") {
    CHECK_THROWS_AS(selection_probabilities(Eigen::ArrayXd()), std::domain_error);
    Eigen::ArrayXd bad(2);
    bad << 0.0, std::nan("");
    CHECK_THROWS_AS(selection_probabilities(bad), std::domain_error);
  }
}

TEST_CASE("application sampling follows min(1, a P_k) per pair") {
  SUBCASE("a P_k >= 1 makes a company unanimous") {
    Eigen::ArrayXd p(2);
    p << 0.8, 0.2;
    Rng rng(7);
    const auto apps = sample_applications(p, 2.0, 50, rng);
    for (const auto& sheets : apps)
      CHECK(std::find(sheets.begin(), sheets.end(), 0) != sheets.end());
  }

  SUBCASE("single company with a = 1 gets every student") {
    Eigen::ArrayXd p(1);
    p << 1.0;
    Rng rng(7);
    const auto apps = sample_applications(p, 1.0, 20, rng);
    for (const auto& sheets : apps) {
      REQUIRE(sheets.size() == 1);
      CHECK(sheets[0] == 0);
    }
  }

  SUBCASE("per-student sheet counts concentrate around a") {
    const Eigen::Index students = 2000;
    const Eigen::ArrayXd p = Eigen::ArrayXd::Constant(100, 0.01);
    Rng rng(2024);
    const auto apps = sample_applications(p, 7.0, students, rng);
    double total = 0.0;
    for (const auto& sheets : apps) total += static_cast<double>(sheets.size());
    const double mean = total / static_cast<double>(students);
    // Binomial(100, 0.07) per student: sd of the mean is about 0.057.
    CHECK(std::abs(mean - 7.0) < 3 * 0.058);
  }

  SUBCASE("same seed, same application sets") {
    Eigen::ArrayXd p(5);
    p << 0.1, 0.3, 0.2, 0.25, 0.15;
    Rng rng_a(11), rng_b(11);
    CHECK(sample_applications(p, 2.0, 30, rng_a) ==
          sample_applications(p, 2.0, 30, rng_b));
  }
}

TEST_CASE("matching respects quotas and selects winners uniformly") {
  SUBCASE("under-subscribed companies accept everyone") {
    std::vector<std::vector<std::int32_t>> apps = {{0}, {0}, {0}, {0}, {0}};
    Eigen::ArrayXi quotas(1);
    quotas << 10;
    Rng rng(3);
    const MatchResult m = match(apps, quotas, rng);
    CHECK(m.hires[0] == 5);
    CHECK((m.acceptance_counts == 1).all());
  }

  SUBCASE("a student with no applications stays unmatched") {
    std::vector<std::vector<std::int32_t>> apps = {{0}, {}};
    Eigen::ArrayXi quotas(1);
    quotas << 1;
    Rng rng(3);
    const MatchResult m = match(apps, quotas, rng);
    CHECK(m.acceptance_counts[0] == 1);
    CHECK(m.acceptance_counts[1] == 0);
  }

  SUBCASE("over-subscription hires exactly the quota, each with chance quota/v") {
    const int students = 20, quota = 10, repetitions = 4000;
    std::vector<std::vector<std::int32_t>> apps(students, {0});
    Eigen::ArrayXi quotas(1);
    quotas << quota;
    Rng rng(12345);
    int wins_of_student0 = 0;
    for (int r = 0; r < repetitions; ++r) {
      const MatchResult m = match(apps, quotas, rng);
      CHECK(m.hires[0] == quota);
      CHECK(m.acceptance_counts.sum() == quota);
      wins_of_student0 += m.acceptance_counts[0];
    }
    const double freq = static_cast<double>(wins_of_student0) / repetitions;
    // Marginal selection probability is 0.5; 3 sigma of the estimate.
    CHECK(std::abs(freq - 0.5) < 3 * std::sqrt(0.25 / repetitions));
  }

  SUBCASE("an application to an unknown company is rejected") {
    std::vector<std::vector<std::int32_t>> apps = {{2}};
    Eigen::ArrayXi quotas(1);
    quotas << 1;
    Rng rng(3);
    CHECK_THROWS_AS(match(apps, quotas, rng), std::domain_error);
  }
}

TEST_CASE("yearly step composes the pieces") {
  SUBCASE("no ranking, no history: uniform probabilities every year") {
    MarketParams params = MarketParams::homogeneous(20, 100, 3);
    params.ranking_weight = 0.0;
    params.history_weights = Eigen::ArrayXd::Zero(1);
    params.horizon = 5;
    params.seed = 5;
    MarketState state = make_initial_state(params);
    for (int t = 0; t < 5; ++t) {
      const YearOutcome outcome = step(state, params);
      CHECK((outcome.probabilities - 1.0 / 20).abs().maxCoeff() < 1e-14);
    }
  }

  SUBCASE("identical seeds give identical trajectories") {
    MarketParams params = MarketParams::homogeneous(15, 60, 2);
    params.mean_applications = 2.0;
    params.history_weights = Eigen::ArrayXd::Constant(1, 1.0);
    params.horizon = 40;
    params.seed = 321;
    const RecordOptions record{true, true};
    const SeriesObservables a = run_market(params, record);
    const SeriesObservables b = run_market(params, record);
    CHECK((a.unemployment == b.unemployment).all());
    CHECK((a.sheet_counts == b.sheet_counts).all());
    CHECK((a.application_counts == b.application_counts).all());
  }

  SUBCASE("one student, one slot, one sheet: permanent full employment") {
    MarketParams params = MarketParams::homogeneous(1, 1, 1);
    params.horizon = 50;
    params.seed = 9;
    const SeriesObservables series = run_market(params);
    CHECK((series.unemployment == 0.0).all());
  }

  SUBCASE("bookkeeping invariants on a random market") {
    MarketParams params = MarketParams::homogeneous(12, 80, 4);
    params.mean_applications = 3.0;
    params.ranking_weight = 2.0;
    params.history_weights = Eigen::ArrayXd::Constant(1, 5.0);
    params.horizon = 30;
    params.seed = 77;
    validate(params);
    MarketState state = make_initial_state(params);
    const double alpha = params.job_offer_ratio();
    for (int t = 0; t < params.horizon; ++t) {
      const YearOutcome outcome = step(state, params);
      std::size_t sheets = 0;
      for (const auto& s : outcome.applications) sheets += s.size();
      CHECK(state.sheet_counts.sum() == static_cast<int>(sheets));
      CHECK((outcome.hires <= params.quotas).all());
      CHECK((outcome.hires <= state.sheet_counts).all());
      for (Eigen::Index i = 0; i < params.students; ++i)
        CHECK(state.acceptance_counts[i] <=
              static_cast<int>(outcome.applications[i].size()));
      CHECK(1.0 - outcome.unemployment <= std::min(1.0, alpha) + 1e-12);
      CHECK(std::abs(outcome.probabilities.sum() - 1.0) < 1e-12);
    }
  }

  SUBCASE("history ring feeds lags in order") {
    // Two lags with weights (0, 1): year 1 must ignore year 0's mismatch
    // and year 2 must see it.
    MarketParams params = MarketParams::homogeneous(6, 30, 2);
    params.ranking_weight = 0.0;
    params.mean_applications = 1.0;
    Eigen::ArrayXd beta(2);
    beta << 0.0, 1.0;
    params.history_weights = beta;
    params.horizon = 3;
    params.seed = 13;
    MarketState state = make_initial_state(params);

    const YearOutcome year0 = step(state, params);
    const Eigen::ArrayXd mismatch0 = state.mismatch_history.col(0);
    const YearOutcome year1 = step(state, params);
    CHECK((year1.probabilities - 1.0 / 6).abs().maxCoeff() < 1e-14);
    const YearOutcome year2 = step(state, params);
    const Eigen::ArrayXd expected = selection_probabilities(mismatch0);
    CHECK((year2.probabilities - expected).abs().maxCoeff() < 1e-14);
    (void)year0;
  }
}

TEST_CASE("tiny market Monte Carlo agrees with exhaustive enumeration") {
  const double exact = oracle::tiny_market_expected_unemployment(1.0);

  MarketParams params = MarketParams::homogeneous(2, 2, 1);
  params.ranking_weight = 1.0;
  params.history_weights = Eigen::ArrayXd::Zero(1);
  params.horizon = 30000;
  params.seed = 2718;
  const SeriesObservables series = run_market(params);
  const double mean = series.unemployment.mean();
  const double standard_error =
      std::sqrt((series.unemployment - mean).square().sum() /
                (params.horizon - 1.0) / params.horizon);
  CHECK(std::abs(mean - exact) < 3 * standard_error);
}
