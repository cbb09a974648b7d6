#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "laborsim/market.hpp"

namespace laborsim {

// Fraction of students with zero acceptances.
double unemployment_rate(const Eigen::Ref<const Eigen::ArrayXi>& acceptance_counts);

// Long-run order parameter: mean of U_t over t >= burn_in.
double order_parameter(const Eigen::Ref<const Eigen::ArrayXd>& unemployment,
                       long burn_in);

// Normalized frequency histogram of an integer-valued series.
struct Histogram {
  std::vector<long long> support;  // observed values, ascending
  Eigen::ArrayXd mass;             // relative frequencies, sums to 1
};

Histogram empirical_distribution(std::span<const int> values);
Histogram empirical_distribution(std::span<const long long> values);

// Thermodynamic-limit estimate of the ranking-only selection probability:
// P_k ~ ((gamma+1)/K) * (1+k/K)^gamma / (2^(gamma+1) - 1).
double thermodynamic_selection_probability(Eigen::Index k, Eigen::Index companies,
                                           double ranking_weight);

enum class RankEnd { lowest, highest };

// Large-system probability that the lowest- or highest-ranked company
// receives no sheet at all in a year:
//   highest: exp(-a N (gamma+1) / (2 K))
//   lowest:  exp(-a N (gamma+1) / (2^(gamma+1) K))
// Evaluated in log space so huge gamma degrades gracefully to 0 and 1.
double empty_company_probability(double mean_applications, double students,
                                 double companies, double ranking_weight,
                                 RankEnd which);

// Employment floor v/N reached when every student chases the single
// top-ranked company and only its quota is filled.
double residual_employment(double quota, double students);

struct SweepResult {
  Eigen::ArrayXd grid;               // swept parameter values
  Eigen::ArrayXd employment_mean;    // mean of 1-U per cell
  Eigen::ArrayXd employment_stderr;  // standard error across trials
  int trials = 0;
};

// Employment versus job offer ratio. Each alpha is realized by rescaling
// the (homogeneous) quotas at fixed N and K; cells run `trials` times with
// seeds derived from (seed, cell, trial), so any thread count reproduces
// the serial result. threads = 0 picks the hardware concurrency.
SweepResult beveridge_sweep(const MarketParams& base,
                            const Eigen::Ref<const Eigen::ArrayXd>& alphas,
                            int trials, int threads = 0);

// Employment versus ranking weight gamma at fixed everything else.
SweepResult gamma_sweep(const MarketParams& base,
                        const Eigen::Ref<const Eigen::ArrayXd>& gammas,
                        int trials, int threads = 0);

}  // namespace laborsim
