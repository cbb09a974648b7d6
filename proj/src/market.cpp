#include "laborsim/market.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace laborsim {

MarketParams MarketParams::homogeneous(Eigen::Index companies,
                                       Eigen::Index students, int quota) {
  MarketParams p;
  p.companies = companies;
  p.students = students;
  p.quotas = Eigen::ArrayXi::Constant(companies, quota);
  p.history_weights = Eigen::ArrayXd::Constant(1, 1.0);
  return p;
}

void validate(const MarketParams& p) {
  if (p.companies < 1) throw std::domain_error("market: companies must be >= 1");
  if (p.students < 1) throw std::domain_error("market: students must be >= 1");
  if (p.quotas.size() != p.companies)
    throw std::domain_error("market: quotas must have one entry per company");
  if ((p.quotas < 1).any())
    throw std::domain_error("market: every quota must be >= 1");
  if (!(p.mean_applications > 0) || !std::isfinite(p.mean_applications))
    throw std::domain_error("market: mean_applications must be positive");
  if (!(p.ranking_weight >= 0) || !std::isfinite(p.ranking_weight))
    throw std::domain_error("market: ranking_weight must be >= 0");
  if (p.history_weights.size() < 1)
    throw std::domain_error("market: history_weights must have length >= 1");
  if (!p.history_weights.isFinite().all())
    throw std::domain_error("market: history_weights must be finite");
  if (p.horizon < 1) throw std::domain_error("market: horizon must be >= 1");
  if (p.burn_in < 0 || p.burn_in >= p.horizon)
    throw std::domain_error("market: burn_in must be in [0, horizon)");
}

double ranking_factor(Eigen::Index k, Eigen::Index companies) {
  if (k < 1 || k > companies)
    throw std::domain_error("ranking_factor: company index out of range");
  return 1.0 + static_cast<double>(k) / static_cast<double>(companies);
}

Eigen::ArrayXd ranking_factors(Eigen::Index companies) {
  if (companies < 1)
    throw std::domain_error("ranking_factors: need at least one company");
  const double count = static_cast<double>(companies);
  return 1.0 + Eigen::ArrayXd::LinSpaced(companies, 1.0, count) / count;
}

double mismatch(double quota, double applicants, double total_vacancies) {
  if (!(total_vacancies > 0))
    throw std::domain_error("mismatch: total vacancies must be positive");
  return std::abs(quota - applicants) / total_vacancies;
}

double local_energy(double ranking,
                    const Eigen::Ref<const Eigen::ArrayXd>& mismatch_history,
                    const Eigen::Ref<const Eigen::ArrayXd>& history_weights,
                    double ranking_weight) {
  if (mismatch_history.size() != history_weights.size())
    throw std::domain_error(
        "local_energy: mismatch history and history weights differ in length");
  if (!(ranking > 0))
    throw std::domain_error("local_energy: ranking factor must be positive");
  return -ranking_weight * std::log(ranking) +
         (mismatch_history * history_weights).sum();
}

std::vector<std::vector<std::int32_t>> sample_applications(
    const Eigen::Ref<const Eigen::ArrayXd>& probabilities,
    double mean_applications, Eigen::Index students, Rng& rng) {
  if (probabilities.size() == 0)
    throw std::domain_error("sample_applications: no companies");
  if (!(mean_applications > 0))
    throw std::domain_error("sample_applications: mean_applications must be positive");
  const Eigen::ArrayXd post_prob =
      (probabilities * mean_applications).min(1.0);
  const Eigen::Index companies = post_prob.size();
  std::vector<std::vector<std::int32_t>> applications(
      static_cast<std::size_t>(students));
  const double* p = post_prob.data();
  for (auto& sheets : applications) {
    for (Eigen::Index k = 0; k < companies; ++k) {
      if (rng.uniform01() < p[k]) sheets.push_back(static_cast<std::int32_t>(k));
    }
  }
  return applications;
}

MatchResult match(const std::vector<std::vector<std::int32_t>>& applications,
                  const Eigen::ArrayXi& quotas, Rng& rng) {
  const Eigen::Index companies = quotas.size();
  const Eigen::Index students = static_cast<Eigen::Index>(applications.size());

  std::vector<std::vector<std::int32_t>> applicants(
      static_cast<std::size_t>(companies));
  for (Eigen::Index i = 0; i < students; ++i) {
    for (std::int32_t k : applications[static_cast<std::size_t>(i)]) {
      if (k < 0 || k >= companies)
        throw std::domain_error("match: application to unknown company");
      applicants[static_cast<std::size_t>(k)].push_back(
          static_cast<std::int32_t>(i));
    }
  }

  MatchResult result;
  result.acceptance_counts = Eigen::ArrayXi::Zero(students);
  result.hires = Eigen::ArrayXi::Zero(companies);
  result.sheet_counts = Eigen::ArrayXi::Zero(companies);

  for (Eigen::Index k = 0; k < companies; ++k) {
    auto& pool = applicants[static_cast<std::size_t>(k)];
    const auto count = static_cast<Eigen::Index>(pool.size());
    result.sheet_counts[k] = static_cast<int>(count);
    const Eigen::Index quota = quotas[k];
    if (count <= quota) {
      for (std::int32_t i : pool) ++result.acceptance_counts[i];
      result.hires[k] = static_cast<int>(count);
    } else {
      // Partial Fisher-Yates: the first `quota` entries become the winners.
      for (Eigen::Index j = 0; j < quota; ++j) {
        const auto pick =
            j + static_cast<Eigen::Index>(
                    rng.below(static_cast<std::uint64_t>(count - j)));
        std::swap(pool[static_cast<std::size_t>(j)],
                  pool[static_cast<std::size_t>(pick)]);
        ++result.acceptance_counts[pool[static_cast<std::size_t>(j)]];
      }
      result.hires[k] = static_cast<int>(quota);
    }
  }
  return result;
}

MarketState make_initial_state(const MarketParams& params) {
  MarketState state;
  state.year = 0;
  state.sheet_counts = Eigen::ArrayXi::Zero(params.companies);
  state.mismatch_history =
      Eigen::ArrayXXd::Zero(params.companies, params.history_weights.size());
  state.acceptance_counts = Eigen::ArrayXi::Zero(params.students);
  state.rng = Rng(params.seed);
  return state;
}

YearOutcome step(MarketState& state, const MarketParams& params) {
  const Eigen::ArrayXd energies =
      -params.ranking_weight * ranking_factors(params.companies).log() +
      (state.mismatch_history.matrix() * params.history_weights.matrix())
          .array();

  YearOutcome outcome;
  outcome.probabilities = selection_probabilities(energies);
  outcome.applications =
      sample_applications(outcome.probabilities, params.mean_applications,
                          params.students, state.rng);
  MatchResult matched = match(outcome.applications, params.quotas, state.rng);
  outcome.hires = std::move(matched.hires);
  outcome.unemployment =
      static_cast<double>((matched.acceptance_counts == 0).count()) /
      static_cast<double>(params.students);

  const double vacancies = static_cast<double>(params.total_vacancies());
  const Eigen::ArrayXd current_mismatch =
      (params.quotas.cast<double>() - matched.sheet_counts.cast<double>())
          .abs() /
      vacancies;
  for (Eigen::Index j = state.mismatch_history.cols() - 1; j >= 1; --j)
    state.mismatch_history.col(j) = state.mismatch_history.col(j - 1);
  state.mismatch_history.col(0) = current_mismatch;

  state.sheet_counts = std::move(matched.sheet_counts);
  state.acceptance_counts = std::move(matched.acceptance_counts);
  ++state.year;
  return outcome;
}

SeriesObservables run_market(const MarketParams& params,
                             const RecordOptions& record) {
  validate(params);
  MarketState state = make_initial_state(params);

  SeriesObservables series;
  series.unemployment = Eigen::ArrayXd::Zero(params.horizon);
  if (record.sheet_counts)
    series.sheet_counts = Eigen::ArrayXXi::Zero(params.horizon, params.companies);
  if (record.application_counts)
    series.application_counts =
        Eigen::ArrayXXi::Zero(params.horizon, params.students);

  for (long t = 0; t < params.horizon; ++t) {
    const YearOutcome outcome = step(state, params);
    series.unemployment[t] = outcome.unemployment;
    if (record.sheet_counts)
      series.sheet_counts.row(t) = state.sheet_counts.transpose();
    if (record.application_counts) {
      for (Eigen::Index i = 0; i < params.students; ++i)
        series.application_counts(t, i) = static_cast<int>(
            outcome.applications[static_cast<std::size_t>(i)].size());
    }
  }
  return series;
}

}  // namespace laborsim
