// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "exal/metric.hpp"
#include "exal/types.hpp"

namespace exal {

/**
 * @brief First-order data of a constrained problem at a point x.
 *
 * Gradients and Jacobians are COORDINATE objects: grad_f[i] = ∂f/∂xᵢ, and
 * JF/Jg hold one constraint per row.  On a metric-equipped problem the
 * Hilbert gradient is Metric::riesz(grad_f).
 */
struct FirstOrder {
  double f = 0.0;
  Vec grad_f;  ///< n
  Vec F;       ///< ℓ equality residuals
  Mat JF;      ///< ℓ × n
  Vec g;       ///< m inequality residuals (g ≤ 0 feasible)
  Mat Jg;      ///< m × n
};

/// Coordinate Hessians of f, F_k and g_i (symmetric n × n each).
struct SecondOrder {
  Mat hess_f;
  std::vector<Mat> hess_F;
  std::vector<Mat> hess_g;
};

/// A certified KKT triple with its objective value, when one is known.
struct KnownSolution {
  Vec x;
  Vec lam;
  Vec mu;
  double f_star = 0.0;
};

/**
 * @brief A smooth constrained minimization problem
 *
 *   min f(x)  subject to  F(x) = 0 (ℓ equalities), g(x) ≤ 0 (m inequalities)
 *
 * over a primal space X given in coordinates x ∈ ℝⁿ with inner product
 * ⟨u,v⟩ = uᵀ G v (identity G unless @ref metric is equipped).  Second-order
 * hooks are optional; operations that need them either fail with
 * SecondOrderUnavailable or fall back to finite differences, as documented
 * per operation.
 */
struct Problem {
  std::string name;
  std::string description;
  Eigen::Index n = 0, l = 0, m = 0;

  std::function<double(const Vec&)> f;
  std::function<Vec(const Vec&)> grad_f;
  std::function<Vec(const Vec&)> F;   // unused when ℓ = 0
  std::function<Mat(const Vec&)> JF;
  std::function<Vec(const Vec&)> g;   // unused when m = 0
  std::function<Mat(const Vec&)> Jg;

  std::function<Mat(const Vec&)> hess_f;                 // n × n
  std::function<Mat(const Vec&, Eigen::Index)> hess_F;   // k-th equality
  std::function<Mat(const Vec&, Eigen::Index)> hess_g;   // i-th inequality

  Metric metric;                        ///< identity unless equipped
  std::optional<KnownSolution> known;   ///< certified KKT triple, if any
  PrimalDual start;                     ///< default solver start

  /// Box from which x is drawn by randomized checks and extra sweep starts.
  Vec sample_lo, sample_hi;
  /// Multipliers are drawn from [−multiplier_box, multiplier_box].
  double multiplier_box = 2.0;

  bool has_second_order() const {
    return static_cast<bool>(hess_f) && (l == 0 || static_cast<bool>(hess_F)) &&
           (m == 0 || static_cast<bool>(hess_g));
  }
};

/**
 * @brief Evaluates and validates first-order data at x.
 *
 * @throws ContractViolation on dimension mismatches.
 * @throws NonFiniteEvaluation naming the offending component when an
 *         evaluator returns NaN or ±Inf.
 */
FirstOrder eval_first_order(const Problem& p, const Vec& x);

/**
 * @brief Evaluates and validates Hessians at x.
 *
 * Each Hessian is required symmetric to 1e-12 (relative to its magnitude).
 * @throws SecondOrderUnavailable ("second-order unavailable") when hooks are
 *         missing; ContractViolation on asymmetry or dimension mismatch.
 */
SecondOrder eval_second_order(const Problem& p, const Vec& x);

/**
 * @brief Like eval_second_order, but problems without hooks get symmetrized
 * central-difference Hessians (step ∛ε·max(1,|xᵢ|)) built from first-order
 * data instead of an error.
 */
SecondOrder eval_second_order_or_fd(const Problem& p, const Vec& x);

/**
 * @brief Hilbert gradient of the classical Lagrangian,
 * ∇ₓL = ∇f + DF*λ + Σᵢ μᵢ ∇gᵢ ∈ X (i.e. riesz(∇̂f + JFᵀλ + Jgᵀμ)).
 */
Vec grad_lagrangian(const Problem& p, const PrimalDual& xi);

/// Names of all registered problems, in registry order.
std::vector<std::string> registry_names();

/**
 * @brief Looks up a built-in problem by name.
 * @throws UnknownProblem ("unknown problem ...") listing valid names.
 */
const Problem& registry_lookup(const std::string& name);

}  // namespace exal
