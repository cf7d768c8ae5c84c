// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#pragma once

#include "exal/problem.hpp"
#include "exal/shaping.hpp"
#include "exal/types.hpp"

namespace exal {

/// Penalty parameter and shaping functions of the augmented Lagrangian.
struct AlfConfig {
  double c = 1.0;
  Phi phi = make_phi("linear");
  Psi psi = make_psi("const", {1.0});
};

/**
 * @brief Value-level evaluation of the exact augmented Lagrangian
 *
 *   ℒ_c(x, λ, μ) = f + ⟨λ, F⟩ + (c/2)(1 + ‖λ‖²) φ(‖F‖²)
 *                  + ⟨μ, q⟩ + (c/2p)|q|² + η(x, λ, μ),
 *
 * with b = ψ(max{g, 0}), p = b/(1 + ‖μ‖²), q = max{g, −(p/c)μ}
 * (componentwise), and η the stationarity penalty of @ref eta_value.  The
 * value is +∞ outside Ω = {x : b(x) > 0, φ(‖F(x)‖²) < ∞}.
 *
 * When in_omega is false only value (+∞), f, F, g, b and infeasibility are
 * meaningful; p is set to 0, q to max{g, 0}, and eta to 0 as diagnostics.
 */
struct AlfEvaluation {
  bool in_omega = false;
  double value = 0.0;
  double f = 0.0;          ///< raw objective
  Vec F, g;                ///< constraint residuals
  double b = 0.0;          ///< ψ(max{g,0})
  double p = 0.0;          ///< b/(1+‖μ‖²)
  Vec q;                   ///< shifted inequality residual
  double eta = 0.0;        ///< stationarity penalty (≥ 0)
  double infeasibility = 0.0;  ///< ‖F‖ + |q| (|max{g,0}| outside Ω)
};

/// Whether x lies in the open domain Ω (b(x) > 0 and φ(‖F(x)‖²) < ∞).
bool in_omega(const Problem& p, const AlfConfig& cfg, const Vec& x);

/**
 * @brief The scaling pair (b, p) = (ψ(max{g,0}), b/(1+‖μ‖²)) at (x, μ).
 * @throws ContractViolation when x is outside Ω.
 */
std::pair<double, double> inequality_scaling(const Problem& p,
                                             const AlfConfig& cfg,
                                             const Vec& x, const Vec& mu);

/**
 * @brief Shifted inequality residual q = max{g(x), −(p/c)μ} (componentwise).
 * @throws ContractViolation when x is outside Ω.
 */
Vec shifted_residual(const Problem& p, const AlfConfig& cfg, const Vec& x,
                     const Vec& mu);

/**
 * @brief Stationarity penalty
 *
 *   η(x, λ, μ) = ½‖DF[∇ₓL]‖² + ½ Σᵢ (⟨∇gᵢ, ∇ₓL⟩ + gᵢ² μᵢ)²,
 *
 * where ∇ₓL is the Hilbert gradient of the classical Lagrangian.  Needs only
 * first-order data; nonnegative everywhere, zero at KKT triples.
 */
double eta_value(const Problem& p, const PrimalDual& xi);

/// Full value-level evaluation (never throws for x outside Ω: value = +∞).
AlfEvaluation alf_value(const Problem& p, const AlfConfig& cfg,
                        const PrimalDual& xi);

/**
 * @brief Algebraically equivalent regrouping
 *
 *   ℒ = L(x,λ,μ) + (c/2)(1+‖λ‖²) φ(‖F‖²)
 *       + (c/2p)(|g|² − |min{0, g + (p/c)μ}|²) + η,
 *
 * with L = f + ⟨λ,F⟩ + ⟨μ,g⟩ the classical Lagrangian.  Used as an
 * independent implementation for consistency tests.
 * @throws ContractViolation when x is outside Ω.
 */
double alf_value_alt_form(const Problem& p, const AlfConfig& cfg,
                          const PrimalDual& xi);

/// How alf_gradient obtains the Hessians its x-block needs.
enum class SecondOrderMode {
  analytic_or_fd,  ///< use hooks when present, finite differences otherwise
  analytic_only    ///< throw SecondOrderUnavailable when hooks are missing
};

/**
 * @brief Gradient of ℒ_c at a point of Ω × ℝ^ℓ × ℝ^m.
 *
 * gx is the Hilbert gradient (element of X); gx_coord = G·gx is the
 * coordinate covector, i.e. what a finite difference of the value against
 * the coordinates converges to.  norm is the product-space norm
 * √(‖gx‖²_X + |gλ|² + |gμ|²).
 */
struct AlfGradient {
  Vec gx;
  Vec gx_coord;
  Vec glam;
  Vec gmu;
  double norm = 0.0;
};

/**
 * @brief Analytic gradient of the augmented Lagrangian.
 *
 * Only the x-block needs second-order data (Hessians of f, F, g); the
 * multiplier blocks are first-order.  With SecondOrderMode::analytic_only a
 * problem without Hessian hooks fails with SecondOrderUnavailable; the
 * default silently falls back to symmetrized central differences with step
 * ∛ε·max(1,|xᵢ|).
 * @throws ContractViolation when x is outside Ω.
 */
AlfGradient alf_gradient(const Problem& p, const AlfConfig& cfg,
                         const PrimalDual& xi,
                         SecondOrderMode mode = SecondOrderMode::analytic_or_fd);

/**
 * @brief The multiplier blocks (gλ, gμ) alone, from first-order data only.
 */
std::pair<Vec, Vec> alf_gradient_multipliers(const Problem& p,
                                             const AlfConfig& cfg,
                                             const PrimalDual& xi);

/**
 * @brief Certified lower bounds on ℒ_c at a point of Ω, valid pointwise:
 *
 *   bound1 = f + (c/2)φ(‖F‖²) − 1/(2cφ₀) + (c/2b)|q|² − ψ(0)/(2c) + η,
 *   bound2 = f + (c/2)φ(‖F‖²) − 1/(2cφ₀) + (c/2ψ(0))|max{g,0}|²
 *            − (1+m)ψ(0)/(2c) + η,
 *
 * with ℒ ≥ bound1 ≥ bound2.  bound2 decouples the multipliers entirely and
 * drives coercivity estimates.
 * @throws LemmaHypothesisUnavailable ("lemma hypothesis unavailable") when
 *         the φ shape declares no minorant slope φ₀.
 * @throws ContractViolation when x is outside Ω.
 */
struct AlfLowerBounds {
  double bound1 = 0.0;
  double bound2 = 0.0;
};
AlfLowerBounds alf_lower_bounds(const Problem& p, const AlfConfig& cfg,
                                const PrimalDual& xi);

}  // namespace exal
