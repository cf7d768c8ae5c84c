// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "exal/problem.hpp"
#include "exal/types.hpp"

namespace exal {

/**
 * @brief Gram matrix of the constraint-geometry operator at x.
 *
 * With 𝓔*(λ, μ) = (DF*λ + Σᵢ μᵢ∇gᵢ; diag(gᵢ)μ) the composition 𝓔𝓔* acts on
 * ℝ^{ℓ+m} with matrix
 *
 *   S = [ JF G⁻¹ JFᵀ          JF G⁻¹ Jgᵀ            ]
 *       [ Jg G⁻¹ JFᵀ          Jg G⁻¹ Jgᵀ + diag(gᵢ²) ]
 *
 * (symmetric positive semidefinite; G is the X-metric Gram matrix).
 */
Mat assemble_gram(const Problem& p, const Vec& x);

/**
 * @brief The regularity quadratic form evaluated directly from operators:
 *
 *   Q(x)[λ,μ] = ½‖DF[z]‖² + ½|∇g(x) z + diag(gᵢ²)μ|²,
 *   z = DF*λ + Σᵢ μᵢ ∇gᵢ,
 *
 * equal to ½|S(λ;μ)|² with S the matrix of assemble_gram.
 */
double q_form_value(const Problem& p, const Vec& x, const Vec& lam,
                    const Vec& mu);

/**
 * @brief Largest a such that Q(x)[λ,μ] ≥ a·(‖λ‖² + |μ|²)/... i.e. the
 * infimum of Q on the unit sphere of ℝ^{ℓ+m}: a_max = ½ λ_min(S)²
 * (clamped at 0).  Strictly positive exactly when the constraint gradients
 * plus inactive-slack scaling are nondegenerate at x.
 * @throws NumericalFailure (with the matrix in the message) if the symmetric
 *         eigensolver fails.
 */
double a_max(const Problem& p, const Vec& x);

/**
 * @brief Least-squares multiplier estimate at x: solves
 * S(λ; μ) = −(JF ∇f; Jg ∇f) (Hilbert gradient ∇f), which makes the
 * stationarity penalty η(x, λ(x), μ(x)) vanish.  Returns std::nullopt
 * ("singular") when λ_min(S) < a_tol; a deliberately un-regularized refusal.
 */
std::optional<std::pair<Vec, Vec>> multiplier_estimate(const Problem& p,
                                                       const Vec& x,
                                                       double a_tol = 1e-10);

/// Blockwise KKT residual at a primal-dual point.
struct KktResidual {
  double stationarity = 0.0;     ///< ‖∇ₓL‖_X
  double feasibility_eq = 0.0;   ///< ‖F‖
  double feasibility_comp = 0.0; ///< |max{g, −μ}| (Euclidean)
  double total = 0.0;            ///< max of the three
};
KktResidual kkt_residual(const Problem& p, const PrimalDual& xi);

/**
 * @brief Exact decomposition of the stationarity penalty as a quadratic in
 * the multipliers: η(x, λ, μ) = Q(x)[λ,μ] + ⟨Q1_lambda, λ⟩ + ⟨Q1_mu, μ⟩ + Q0,
 * with
 *
 *   Q1_lambda = DF[DF*(DF[∇f])] + Σᵢ ⟨∇gᵢ,∇f⟩ DF[∇gᵢ],
 *   Q1_mu,i   = ⟨DF[∇f], DF[∇gᵢ]⟩ + Σⱼ ⟨∇gⱼ,∇f⟩⟨∇gⱼ,∇gᵢ⟩ + ⟨∇gᵢ,∇f⟩gᵢ²,
 *   Q0        = ½‖DF[∇f]‖² + ½ Σᵢ ⟨∇gᵢ,∇f⟩².
 */
struct EtaDecomposition {
  Vec Q1_lambda;  ///< ℓ
  Vec Q1_mu;      ///< m
  double Q0 = 0.0;
};
EtaDecomposition eta_decomposition(const Problem& p, const Vec& x);

/// Second-order sufficiency audit at a (numerically) certified KKT point.
struct SoscReport {
  std::vector<int> active_set;        ///< indices with |gᵢ| ≤ eps_act
  bool strict_complementarity = false;///< μᵢ ≥ mu_tol on the active set
  Mat cone_basis;                     ///< n × k, X-orthonormal columns
  Mat reduced_hessian;                ///< k × k (bilinear form in that basis)
  double rho = 0.0;                   ///< min eigenvalue; +inf if k = 0
  bool sosc_holds = false;            ///< rho > 0 (vacuously true if k = 0)
};

/**
 * @brief Checks the second-order sufficient condition on the critical cone
 * {z : DF z = 0, ⟨∇gᵢ, z⟩ = 0 for active i}.
 *
 * @param eps_act activity threshold; pass a negative value for the default
 *        1e-6 · max(1, |g|_∞).
 * @param mu_tol strict-complementarity threshold on active multipliers.
 * @throws ContractViolation unless kkt_residual(ξ).total ≤ 1e-8.
 * @throws SecondOrderUnavailable when the problem has no Hessian hooks.
 */
SoscReport sosc_check(const Problem& p, const PrimalDual& xi,
                      double eps_act = -1.0, double mu_tol = 1e-8);

/// Summary used by the CLI `regularity` command.
struct RegularityReport {
  Mat gram;
  double a_max = 0.0;
  bool positive_definite = false;
  double condition = 0.0;  ///< λ_max/λ_min of the gram matrix (inf if singular)
  std::vector<int> active_set;
  std::optional<std::pair<Vec, Vec>> multiplier_estimate;  ///< nullopt = singular
};
RegularityReport regularity_report(const Problem& p, const Vec& x,
                                   double a_tol = 1e-10);

}  // namespace exal
