// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "exal/types.hpp"

namespace exal {

/**
 * @brief Equality-penalty shaping function φ.
 *
 * φ: [0, ∞) → [0, +∞] enters the augmented Lagrangian through the term
 * (c/2)(1 + ‖λ‖²) φ(‖F(x)‖²).  A valid shape satisfies
 *
 *   - φ(0) = 0,
 *   - φ is nondecreasing and convex on its domain,
 *   - φ(t) ≥ φ₀ t for some slope φ₀ > 0 (recorded in @ref phi0 when known).
 *
 * Values may be +∞ (e.g. the barrier shape outside [0, α)); points where
 * φ(‖F‖²) = +∞ are outside the domain Ω of the augmented Lagrangian.
 */
struct Phi {
  std::string kind;  ///< "linear", "barrier", "exp", or "custom".
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  /// Slope of the linear minorant φ(t) ≥ φ₀ t; required by the lower-bound
  /// estimates, absent for custom shapes that do not declare one.
  std::optional<double> phi0;
  /// Right end of the domain for barrier-type shapes (φ = +∞ beyond it).
  std::optional<double> barrier_alpha;

  /// Canonical spelling, e.g. "linear", "barrier:2", "exp".
  std::string describe() const;
};

/**
 * @brief Inequality scaling function ψ.
 *
 * ψ: ℝ^m₊ → ℝ evaluates on the clamped violation y = max{g(x), 0} and defines
 * b(x) = ψ(max{g(x), 0}) and the scaling p(x, μ) = b(x) / (1 + ‖μ‖²).  A
 * valid shape satisfies ψ(0) > 0 and ψ(y) ≤ ψ(0) with gradient vanishing at
 * y = 0.  Points where b(x) ≤ 0 are outside the domain Ω.
 */
struct Psi {
  std::string kind;  ///< "const", "poly", or "custom".
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  double at_zero = 1.0;  ///< ψ(0) > 0.

  /// Canonical spelling, e.g. "const:1", "poly:1,2".
  std::string describe() const;
};

/**
 * @brief Builds a φ shape.
 *
 * Kinds: "linear" (φ(t) = t), "barrier" (φ(t) = t/(α−t) on [0, α), +∞
 * beyond; params = {α}), "exp" (φ(t) = e^t − 1).
 * @throws ContractViolation for an unknown kind or barrier with α ≤ 0.
 */
Phi make_phi(const std::string& kind, const std::vector<double>& params = {});

/**
 * @brief Builds a ψ shape.
 *
 * Kinds: "const" (ψ ≡ β; params = {β}), "poly" (ψ(y) = β − Σᵢ yᵢ^s;
 * params = {β, s}, s > 1 so the gradient vanishes at 0).
 * @throws ContractViolation for an unknown kind, β ≤ 0, or s ≤ 1.
 */
Psi make_psi(const std::string& kind, const std::vector<double>& params = {});

/// Parses CLI spellings "linear" | "barrier:2" | "exp".
Phi parse_phi(const std::string& spec);

/// Parses CLI spellings "const:1" | "poly:1,2" (bare "const" means β = 1).
Psi parse_psi(const std::string& spec);

/// Result of a randomized axiom audit of a shape.
struct ShapeAxiomReport {
  long long samples = 0;
  long long violations = 0;
  double worst = 0.0;       ///< Largest violation magnitude observed.
  std::string worst_case;   ///< Human-readable description of the worst one.
};

/**
 * @brief Randomized audit of the φ axioms (φ(0) = 0, monotone, convex,
 * minorant φ(t) ≥ φ₀ t, derivative consistent with finite differences).
 */
ShapeAxiomReport verify_shape_axioms(const Phi& phi, long long samples,
                                     std::uint64_t seed);

/**
 * @brief Randomized audit of the ψ axioms (ψ(0) > 0, ψ ≤ ψ(0), gradient
 * consistent with finite differences) on clamped vectors of dimension @p dim.
 */
ShapeAxiomReport verify_shape_axioms(const Psi& psi, long long samples,
                                     std::uint64_t seed, int dim = 3);

}  // namespace exal
