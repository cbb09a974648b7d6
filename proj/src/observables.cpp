#include "laborsim/observables.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace laborsim {

double unemployment_rate(
    const Eigen::Ref<const Eigen::ArrayXi>& acceptance_counts) {
  if (acceptance_counts.size() == 0)
    throw std::domain_error("unemployment_rate: no students");
  return static_cast<double>((acceptance_counts == 0).count()) /
         static_cast<double>(acceptance_counts.size());
}

double order_parameter(const Eigen::Ref<const Eigen::ArrayXd>& unemployment,
                       long burn_in) {
  if (burn_in < 0 || burn_in >= unemployment.size())
    throw std::domain_error("order_parameter: burn_in leaves no samples");
  return unemployment.tail(unemployment.size() - burn_in).mean();
}

namespace {

template <typename T>
Histogram histogram_of(std::span<const T> values) {
  if (values.empty())
    throw std::domain_error("empirical_distribution: empty series");
  std::map<long long, long long> counts;
  for (T v : values) ++counts[static_cast<long long>(v)];
  Histogram h;
  h.support.reserve(counts.size());
  h.mass.resize(static_cast<Eigen::Index>(counts.size()));
  Eigen::Index i = 0;
  for (const auto& [value, count] : counts) {
    h.support.push_back(value);
    h.mass[i++] = static_cast<double>(count) / static_cast<double>(values.size());
  }
  return h;
}

}  // namespace

Histogram empirical_distribution(std::span<const int> values) {
  return histogram_of(values);
}

Histogram empirical_distribution(std::span<const long long> values) {
  return histogram_of(values);
}

double thermodynamic_selection_probability(Eigen::Index k,
                                           Eigen::Index companies,
                                           double ranking_weight) {
  if (k < 1 || k > companies)
    throw std::domain_error(
        "thermodynamic_selection_probability: company index out of range");
  if (!(ranking_weight >= 0))
    throw std::domain_error(
        "thermodynamic_selection_probability: ranking weight must be >= 0");
  const double count = static_cast<double>(companies);
  const double rank = 1.0 + static_cast<double>(k) / count;
  return (ranking_weight + 1.0) / count *
         std::pow(rank, ranking_weight) /
         (std::exp2(ranking_weight + 1.0) - 1.0);
}

double empty_company_probability(double mean_applications, double students,
                                 double companies, double ranking_weight,
                                 RankEnd which) {
  if (!(mean_applications > 0) || !(students > 0) || !(companies > 0))
    throw std::domain_error("empty_company_probability: a, N, K must be positive");
  if (!(ranking_weight >= 0))
    throw std::domain_error("empty_company_probability: gamma must be >= 0");
  const double log_base =
      std::log(mean_applications * students * (ranking_weight + 1.0) / companies);
  const double log_denominator =
      which == RankEnd::highest ? std::log(2.0)
                                : (ranking_weight + 1.0) * std::log(2.0);
  return std::exp(-std::exp(log_base - log_denominator));
}

double residual_employment(double quota, double students) {
  if (!(students >= 1))
    throw std::domain_error("residual_employment: students must be >= 1");
  if (quota < 0 || quota > students)
    throw std::domain_error("residual_employment: quota must be in [0, students]");
  return quota / students;
}

namespace {

// Runs trials x cells market simulations on a small worker pool and
// returns the per-run employment rates. Every run owns a seed derived
// from (base seed, domain, cell, trial), so the matrix does not depend
// on scheduling order.
Eigen::ArrayXXd run_grid(const MarketParams& base,
                         const Eigen::Ref<const Eigen::ArrayXd>& grid,
                         int trials, int threads, std::uint64_t domain,
                         const std::function<void(MarketParams&, double)>& bind_cell) {
  if (grid.size() < 1) throw std::domain_error("sweep: empty grid");
  if (trials < 1) throw std::domain_error("sweep: trials must be >= 1");

  const Eigen::Index cells = grid.size();
  const Eigen::Index jobs = cells * trials;
  Eigen::ArrayXXd employment(trials, cells);

  std::atomic<Eigen::Index> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const Eigen::Index job = cursor.fetch_add(1);
      if (job >= jobs) return;
      const Eigen::Index cell = job / trials;
      const Eigen::Index trial = job % trials;
      try {
        MarketParams params = base;
        bind_cell(params, grid[cell]);
        params.seed = derive_seed(base.seed, domain,
                                  static_cast<std::uint64_t>(cell),
                                  static_cast<std::uint64_t>(trial));
        const SeriesObservables series = run_market(params);
        employment(trial, cell) =
            1.0 - order_parameter(series.unemployment, params.burn_in);
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::make_exception_ptr(std::domain_error(
              "sweep cell " + std::to_string(cell) + " trial " +
              std::to_string(trial) + ": " + e.what()));
        cursor.store(jobs);
        return;
      }
    }
  };

  int pool = threads > 0 ? threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  pool = std::max(1, std::min<int>(pool, static_cast<int>(jobs)));
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(pool));
  for (int w = 0; w < pool; ++w) workers.emplace_back(worker);
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
  return employment;
}

SweepResult summarize(const Eigen::Ref<const Eigen::ArrayXd>& grid,
                      const Eigen::ArrayXXd& employment, int trials) {
  SweepResult result;
  result.grid = grid;
  result.trials = trials;
  result.employment_mean = employment.colwise().mean();
  result.employment_stderr = Eigen::ArrayXd::Zero(grid.size());
  if (trials > 1) {
    for (Eigen::Index c = 0; c < grid.size(); ++c) {
      const double mean = result.employment_mean[c];
      const double variance =
          (employment.col(c) - mean).square().sum() / (trials - 1);
      result.employment_stderr[c] = std::sqrt(variance / trials);
    }
  }
  return result;
}

}  // namespace

SweepResult beveridge_sweep(const MarketParams& base,
                            const Eigen::Ref<const Eigen::ArrayXd>& alphas,
                            int trials, int threads) {
  validate(base);
  if ((alphas <= 0).any())
    throw std::domain_error("beveridge_sweep: alpha must be positive");
  const double base_vacancies = static_cast<double>(base.total_vacancies());
  const double students = static_cast<double>(base.students);
  auto bind_alpha = [&](MarketParams& params, double alpha) {
    // Rescale quotas toward V = alpha * N, keeping every quota >= 1.
    const double factor = alpha * students / base_vacancies;
    for (Eigen::Index k = 0; k < params.quotas.size(); ++k)
      params.quotas[k] = static_cast<int>(
          std::max<long>(1, std::llround(params.quotas[k] * factor)));
  };
  return summarize(alphas,
                   run_grid(base, alphas, trials, threads, kBeveridgeDomain,
                            bind_alpha),
                   trials);
}

SweepResult gamma_sweep(const MarketParams& base,
                        const Eigen::Ref<const Eigen::ArrayXd>& gammas,
                        int trials, int threads) {
  validate(base);
  if ((gammas < 0).any())
    throw std::domain_error("gamma_sweep: gamma must be >= 0");
  auto bind_gamma = [](MarketParams& params, double gamma) {
    params.ranking_weight = gamma;
  };
  return summarize(gammas,
                   run_grid(base, gammas, trials, threads, kGammaSweepDomain,
                            bind_gamma),
                   trials);
}

}  // namespace laborsim
