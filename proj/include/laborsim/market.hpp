#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "laborsim/rng.hpp"

namespace laborsim {

// Parameters of the microscopic market. K ranked companies with fixed
// yearly quotas receive applications from N students. A company's draw
// weight combines a static ranking preference (weight gamma) with a
// penalty on its recent quota mismatches (weights beta_1..beta_tau).
struct MarketParams {
  Eigen::Index companies = 0;       // K
  Eigen::Index students = 0;        // N
  Eigen::ArrayXi quotas;            // per-company openings, all >= 1
  double mean_applications = 1.0;   // a, sheets posted per student per year
  double ranking_weight = 1.0;      // gamma
  Eigen::ArrayXd history_weights;   // beta_l for lags l = 1..tau
  long horizon = 1;                 // business years to simulate
  long burn_in = 0;                 // years excluded from long-run averages
  std::uint64_t seed = 1;

  std::int64_t total_vacancies() const {  // V
    return quotas.cast<std::int64_t>().sum();
  }
  double job_offer_ratio() const {  // alpha = V/N
    return static_cast<double>(total_vacancies()) /
           static_cast<double>(students);
  }

  // Homogeneous-quota market, the common configuration.
  static MarketParams homogeneous(Eigen::Index companies, Eigen::Index students,
                                  int quota);
};

// Throws std::domain_error on any malformed field.
void validate(const MarketParams& params);

// Static attractiveness of company k (1-based), 1 + k/K in (1, 2].
// Company K is the top-ranked one.
double ranking_factor(Eigen::Index k, Eigen::Index companies);

// All K ranking factors as a dense array.
Eigen::ArrayXd ranking_factors(Eigen::Index companies);

// Mismatch between a company's quota and its applicant count, normalized
// by the market-wide vacancy total: |quota - applicants| / vacancies.
double mismatch(double quota, double applicants, double total_vacancies);

// Company energy: -gamma * log(ranking) + sum_l beta_l * h(t-l).
// mismatch_history holds the most recent value first.
double local_energy(double ranking, const Eigen::Ref<const Eigen::ArrayXd>& mismatch_history,
                    const Eigen::Ref<const Eigen::ArrayXd>& history_weights,
                    double ranking_weight);

// Boltzmann-Gibbs selection probabilities P_k = exp(-E_k) / sum_j exp(-E_j),
// computed with a shift by the minimum energy so large energies cannot
// overflow. The shift leaves the probabilities unchanged.
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> selection_probabilities(
    const Eigen::ArrayBase<Derived>& energies) {
  using Scalar = typename Derived::Scalar;
  if (energies.size() == 0)
    throw std::domain_error("selection_probabilities: no companies");
  if (!energies.isFinite().all())
    throw std::domain_error("selection_probabilities: non-finite energy");
  Eigen::Array<Scalar, Eigen::Dynamic, 1> weights =
      (-(energies - energies.minCoeff())).exp();
  return weights / weights.sum();
}

// One year of applications. Each student posts to company k independently
// with probability min(1, a * P_k), so a company receives a * N * P_k
// sheets on average while per-student totals concentrate around a.
// Returns the set of company indices (0-based) per student.
std::vector<std::vector<std::int32_t>> sample_applications(
    const Eigen::Ref<const Eigen::ArrayXd>& probabilities, double mean_applications,
    Eigen::Index students, Rng& rng);

struct MatchResult {
  Eigen::ArrayXi acceptance_counts;  // s_i per student
  Eigen::ArrayXi hires;              // min(v_k, quota_k) per company
  Eigen::ArrayXi sheet_counts;       // v_k per company
};

// Quota-constrained matching. Companies at or under quota accept every
// applicant; over-subscribed ones pick exactly quota winners uniformly at
// random, so each applicant there wins with probability quota / v_k.
// A student may hold several acceptances and each occupies a slot.
MatchResult match(const std::vector<std::vector<std::int32_t>>& applications,
                  const Eigen::ArrayXi& quotas, Rng& rng);

struct YearOutcome {
  Eigen::ArrayXd probabilities;                     // P_k, sums to 1
  std::vector<std::vector<std::int32_t>> applications;  // per student
  Eigen::ArrayXi hires;                             // per company
  double unemployment = 0.0;                        // U_t
};

struct MarketState {
  long year = 0;                      // completed business years
  Eigen::ArrayXi sheet_counts;        // v_k of the last completed year
  Eigen::ArrayXXd mismatch_history;   // K x tau, column j holds h(t-1-j)
  Eigen::ArrayXi acceptance_counts;   // s_i of the last completed year
  Rng rng;
};

// Fresh state: empty mismatch history (year-0 choice is ranking-only) and
// the generator seeded from the parameters.
MarketState make_initial_state(const MarketParams& params);

// Advance one business year: energies from the mismatch history, selection
// probabilities, application sampling, matching, unemployment, then push
// this year's mismatches onto the history ring.
YearOutcome step(MarketState& state, const MarketParams& params);

struct RecordOptions {
  bool sheet_counts = false;        // per-year per-company v_k
  bool application_counts = false;  // per-year per-student sheet totals
};

struct SeriesObservables {
  Eigen::ArrayXd unemployment;        // U_t, one entry per year
  Eigen::ArrayXXi sheet_counts;       // horizon x K when recorded, else 0x0
  Eigen::ArrayXXi application_counts; // horizon x N when recorded, else 0x0
};

// Run the full horizon from a fresh state.
SeriesObservables run_market(const MarketParams& params,
                             const RecordOptions& record = {});

}  // namespace laborsim
