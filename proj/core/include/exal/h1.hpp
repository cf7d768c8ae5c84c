// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#pragma once

#include <functional>
#include <utility>

#include "exal/types.hpp"

namespace exal {

/**
 * @brief Piecewise-linear discretization of an H¹([a,b]; ℝ^d) function.
 *
 * The function is stored by its nodal values on the uniform grid
 * t_k = a + k·Δt, Δt = (b−a)/N (rows of @ref values; one column per
 * component).  The space carries the inner product
 *
 *   ⟨x, y⟩_X = ⟨x(a), y(a)⟩ + ⟨x(a) + x(b), y(a) + y(b)⟩
 *              + (b−a) ∫ₐᵇ ⟨ẋ(t), ẏ(t)⟩ dt,
 *
 * with the derivative integral evaluated exactly on each cell (piecewise
 * constant derivatives): ∫ = Σ_k ⟨Δx_k, Δy_k⟩ / Δt.  This inner product is
 * equivalent to the usual H¹ one: both endpoint evaluations are bounded
 * functionals, and the boundary-trace operator below has an exact
 * closed-form adjoint.
 */
struct H1Fn {
  double a = 0.0;
  double b = 1.0;
  Mat values;  ///< (N+1) × d nodal values.

  int segments() const { return static_cast<int>(values.rows()) - 1; }
  int components() const { return static_cast<int>(values.cols()); }
  double dt() const { return (b - a) / segments(); }
  double node(int k) const { return a + k * dt(); }

  static H1Fn zeros(double a, double b, int d, int N);

  /// Samples a callable t ↦ ℝ^d at the grid nodes.
  static H1Fn sample(double a, double b, int d, int N,
                     const std::function<Vec(double)>& fn);

  /// Node-major flattening (node 0 components, node 1 components, …).
  Vec flatten() const;

  /// Inverse of flatten() onto the grid of @p like.
  static H1Fn unflatten(const Vec& v, const H1Fn& like);
};

/// ⟨x, y⟩_X (see H1Fn).
double h1_inner(const H1Fn& x, const H1Fn& y);

/**
 * @brief Inner product of the boundary-value space Y = ℝ^d × ℝ^d:
 * ⟨(y₁,y₂), (z₁,z₂)⟩_Y = 3⟨y₁,z₁⟩ + 2⟨y₂,z₂⟩.
 */
double y_inner(const Vec& y1, const Vec& y2, const Vec& z1, const Vec& z2);

/// Boundary-trace operator 𝒜 x = (x(a), x(b)).
std::pair<Vec, Vec> h1_apply_A(const H1Fn& x);

/**
 * @brief Adjoint of the trace operator with respect to ⟨·,·⟩_X and ⟨·,·⟩_Y:
 * (𝒜*y)(t) = y₁ + (y₂ − y₁)(t − a)/(b − a), discretized on the grid of
 * @p like.  Satisfies 𝒜 𝒜* = identity on Y exactly.
 */
H1Fn h1_apply_A_star(const Vec& y1, const Vec& y2, const H1Fn& like);

/**
 * @brief Gram matrix of ⟨·,·⟩_X in node-major flattened coordinates
 * ((N+1)·d square, SPD).  For d = 1 this is the metric used by the
 * h1_boundary registry problem.
 */
Mat h1_gram(double a, double b, int d, int N);

}  // namespace exal
