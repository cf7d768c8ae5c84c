// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace exal {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/**
 * @brief A primal-dual point ξ = (x, λ, μ) ∈ X × ℝ^ℓ × ℝ^m.
 *
 * x lives in the (possibly metric-equipped) primal space X, λ are the
 * equality multipliers and μ the inequality multipliers.  μ is allowed to be
 * negative: the augmented Lagrangian is defined on all of ℝ^m.
 */
struct PrimalDual {
  Vec x;
  Vec lam;
  Vec mu;

  /// Total dimension n + ℓ + m.
  Eigen::Index size() const { return x.size() + lam.size() + mu.size(); }

  /// Flattens to a single coordinate vector (x; λ; μ).
  Vec stack() const {
    Vec v(size());
    v << x, lam, mu;
    return v;
  }

  /// Inverse of stack() given the block sizes.
  static PrimalDual unstack(const Vec& v, Eigen::Index n, Eigen::Index l,
                            Eigen::Index m) {
    if (v.size() != n + l + m) throw std::invalid_argument("unstack: size");
    return PrimalDual{v.segment(0, n), v.segment(n, l), v.segment(n + l, m)};
  }
};

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated by the caller.
struct ContractViolation : Error {
  using Error::Error;
};

/// Registry lookup failed.
struct UnknownProblem : Error {
  using Error::Error;
};

/// An operation needing Hessians was invoked on a first-order-only problem.
struct SecondOrderUnavailable : Error {
  using Error::Error;
};

/// An evaluator returned NaN/Inf; the message names the offending component.
struct NonFiniteEvaluation : Error {
  using Error::Error;
};

/// A lower-bound estimate was requested but the φ-shape carries no φ₀.
struct LemmaHypothesisUnavailable : Error {
  using Error::Error;
};

/// Rejection sampling failed to find a point inside the domain Ω.
struct CannotSampleOmega : Error {
  using Error::Error;
};

/// A dense linear-algebra routine failed to converge; message carries data.
struct NumericalFailure : Error {
  using Error::Error;
};

/// A solve was started at a point outside Ω.
struct InfeasibleStart : Error {
  using Error::Error;
};

}  // namespace exal
