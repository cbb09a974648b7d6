#pragma once

#include <Eigen/Dense>

#include "laborsim/market.hpp"

namespace laborsim {

// Constants of the Neugart flow model for unemployment and inflation.
// Defaults are the standard chaotic-regime parameter set; job_openings
// is usually tied to the fixed point via stationary_job_openings.
struct NeugartParams {
  double separation_rate = 0.18;        // xi, share of jobs lost per period
  double employed_search_share = 0.01;  // d, employed who also search
  double expectation_gain = 0.5;        // c1, adaptive-expectations weight
  double wage_rigidity = 0.5;           // c2, bargained wage w_b = 1-(1-c2)U
  double base_wage_gap = 0.04;          // mu, base wage w_p = 1-mu
  double vacancy_response = 0.5;        // Gamma, openings per money-inflation gap
  double price_scale = 2.0;             // delta, price adjustment scale
  double money_growth = 0.03;           // m
  double job_openings = 0.0;            // J_s, constant openings
};

void validate(const NeugartParams& params);

struct MacroState {
  double unemployment = 0.0;        // U
  double inflation = 0.0;           // pi
  double expected_inflation = 0.0;  // pi_e
};

// Job finding rate o = (J_s + Gamma (m - pi)) / (U + d (1 - U)).
double job_finding_rate(double unemployment, double inflation,
                        const NeugartParams& params);

// One application of the combined inflation map pi -> pi'. The expression
// folds the adaptive expectation update into a function of (U, pi) alone;
// its second bracket is the flow-model projection of next-period
// unemployment evaluated at the supplied U. Also used for the coupled
// mode, where U comes from the microscopic market instead of the flow.
double inflation_step(double unemployment, double inflation,
                      const NeugartParams& params);

// Advance (U, pi, pi_e) one period. U is clamped to [0, 1] afterwards;
// `clamped`, when given, reports whether clamping fired.
MacroState macro_step(const MacroState& state, const NeugartParams& params,
                      bool* clamped = nullptr);

struct MacroFixedPoint {
  double unemployment = 0.0;  // U*
  double inflation = 0.0;     // pi* = m
};

// Stationary point of the maps: pi* = m and
// U* = (mu - m (delta - 1)(1 - mu)) / (1 - c2).
// Throws when c2 = 1 or when U* falls outside (0, 1).
MacroFixedPoint fixed_point(const NeugartParams& params);

// The openings level J_s* = xi (1-U*) (U* + d (1-U*)) / U* that keeps the
// fixed point stationary.
double stationary_job_openings(const NeugartParams& params, double u_star);

struct MacroTrajectory {
  Eigen::ArrayX2d points;  // one (U, pi) row per step
  long clamp_events = 0;
  MacroState final_state;
};

// Iterate macro_step `steps` times, recording the state after each step.
MacroTrajectory run_macro(const NeugartParams& params, const MacroState& initial,
                          long steps);

// Hybrid run: the microscopic market produces U_t each business year and
// the inflation map is iterated with that U_t substituted everywhere.
// Row t pairs U_t with the inflation the map produces from it, which is
// the pairing that exposes the negative Philips relation; the mismatch
// feedback makes U_t oscillate strongly year to year, so pairing U_t with
// the inherited inflation instead would flip the sign of the correlation.
// `initial_inflation` seeds the map before the first update.
Eigen::ArrayX2d coupled_run(const MarketParams& market,
                            const NeugartParams& macro,
                            double initial_inflation = 0.0);

}  // namespace laborsim
