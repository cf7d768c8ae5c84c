// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exal/alf.hpp"
#include "exal/regularity.hpp"
#include "exal/rng.hpp"

namespace exal {

/// Tunables of the unconstrained inner solver and the penalty update loop.
struct SolverConfig {
  double c0 = 1.0;
  double c_growth = 10.0;
  double c_max = 1e8;
  double K = 1.0;            ///< slope of the gradient/infeasibility estimate
  double grad_tol = 1e-8;    ///< inner stationarity tolerance (product norm)
  double kkt_tol = 1e-8;     ///< outer KKT tolerance
  int max_outer = 20;
  int max_inner = 5000;
  double armijo_c1 = 1e-4;
  double armijo_backtrack = 0.5;
  /// "quasi-newton-secant" (limited-memory secant updates) or
  /// "steepest-descent".
  std::string inner_method = "quasi-newton-secant";
  std::uint64_t seed = 0;
  /// After each penalty increase, replace (λ, μ) by the least-squares
  /// multiplier estimate at the current x when it is well posed.
  bool reseed_multipliers = false;
  Phi phi = make_phi("linear");
  Psi psi = make_psi("const", {1.0});
};

/// One accepted inner iterate (entry 0 of each run is the starting point).
struct HistoryEntry {
  int outer = 0;
  int inner = 0;
  double c = 0.0;
  double alf = 0.0;
  double grad_norm = 0.0;
  double infeasibility = 0.0;
};

/**
 * @brief Result of a solve.
 *
 * termination ∈ {"kkt-converged", "c-cap-reached", "iteration-cap",
 * "left-omega"}.  For a fixed-c run "kkt-converged" means the inner
 * stationarity test ‖∇ℒ‖ ≤ grad_tol succeeded (in the exactness regime
 * stationary points of ℒ are KKT points); the kkt field always carries the
 * actual KKT residual so callers can tell the two apart.  status_detail is a
 * human-readable diagnostic (line-search stalls, cap reasons, …).
 */
struct SolveReport {
  std::string problem;
  double c_final = 0.0;
  long long iterations = 0;  ///< total accepted inner iterations
  PrimalDual xi;
  KktResidual kkt;
  double alf_value = 0.0;
  std::vector<HistoryEntry> history;
  std::string termination;
  std::string status_detail;
  bool grad_converged = false;
  /// a_max(x) after each completed inner run (adaptive mode).
  std::vector<double> a_max_by_outer;
  /// KKT residual after each completed inner run (adaptive mode).
  std::vector<double> kkt_by_outer;
  /// Raised when a failed run also shows collapsing regularity (a_max final
  /// below 1e-8 or down by 100× from its initial value): the classic
  /// constraint-qualification failure signature.
  bool cq_warning = false;
};

/**
 * @brief Minimizes ℒ_c over (x, λ, μ) at fixed c by monotone Armijo descent.
 *
 * Directions are steepest descent in the product metric or limited-memory
 * secant (two-loop recursion, memory 10) per SolverConfig::inner_method.
 * Stops when the product-space gradient norm drops to grad_tol or caps are
 * hit; every accepted iterate decreases ℒ strictly, so the alf column of
 * the history is nonincreasing within the run.
 *
 * @throws InfeasibleStart ("infeasible start") when ℒ(start) = +∞.
 */
SolveReport minimize_fixed_c(const Problem& p, const SolverConfig& cfg,
                             double c, const PrimalDual& start,
                             int outer_index = 0);

/**
 * @brief Full adaptive loop: inner-minimize, test the KKT residual, grow c
 * by c_growth on failure (warm-starting from the current iterate), stop at
 * kkt_tol, c_max or max_outer.
 */
SolveReport solve_adaptive(const Problem& p, const SolverConfig& cfg,
                           std::optional<PrimalDual> start = std::nullopt);

/// One cell of an exactness sweep.
struct SweepRow {
  double c = 0.0;
  int start_id = 0;
  bool converged = false;   ///< recovered the certified triple (see below)
  double alf_final = 0.0;
  double dist_to_kkt = 0.0; ///< √(‖x−x*‖²_X + |λ−λ*|² + |μ−μ*|²)
  double infeasibility = 0.0;
  double a_max_final = 0.0;
};

struct SweepTable {
  std::string problem;
  std::vector<SweepRow> rows;  ///< ordered by (c, start_id)
  /// Smallest sampled c at which every start recovered the certified triple
  /// (dist ≤ 1e-6 and |ℒ_final − f*| ≤ 1e-8); absent when none did.
  std::optional<double> threshold_c;
};

/**
 * @brief Fixed-c solves over a grid of penalty values and several starts,
 * tabulating how the certified KKT triple is recovered once c passes the
 * exactness threshold.
 *
 * Start 0 is the problem's default start; further starts are seeded samples
 * from the problem's box (shared across all c values).
 * @throws ContractViolation when the problem has no certified solution.
 */
SweepTable exactness_sweep(const Problem& p, const SolverConfig& cfg,
                           std::vector<double> c_values = {},
                           int num_starts = 2);

/// Result of a randomized analytic-vs-finite-difference gradient audit.
struct GradCheckReport {
  long long samples = 0;
  long long violations = 0;
  double worst = 0.0;       ///< largest mismatch seen over all blocks
  double worst_x = 0.0;     ///< largest mismatch in the x block
  double worst_lam = 0.0;   ///< largest mismatch in the λ block
  double worst_mu = 0.0;    ///< largest mismatch in the μ block
  std::string worst_case;   ///< the point attaining `worst`
  double rtol = 0.0;
};

/**
 * @brief Samples points of Ω × ℝ^ℓ × ℝ^m and compares alf_gradient against
 * central finite differences of alf_value, coordinate by coordinate, with
 * mismatch |a−fd| / max(1, |a|, |fd|) per coordinate.
 *
 * @throws CannotSampleOmega ("cannot sample Omega") if rejection sampling
 *         fails 100 consecutive times.
 */
GradCheckReport gradient_check(const Problem& p, const AlfConfig& cfg,
                               int samples, double rtol, std::uint64_t seed);

/// Uniform sample from the problem's box (x) and multiplier ranges (λ, μ).
PrimalDual sample_point(const Problem& p, Rng& rng);

/// Like sample_point but rejects x outside Ω (up to max_attempts draws).
PrimalDual sample_omega_point(const Problem& p, const AlfConfig& cfg, Rng& rng,
                              int max_attempts = 100);

}  // namespace exal
