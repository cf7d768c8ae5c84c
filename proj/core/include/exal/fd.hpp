// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "exal/types.hpp"

namespace exal {

/// Central-difference step for second-order accuracy: h = ∛ε · max(1, |t|).
inline double fd_step(double t) {
  static const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
  return h0 * std::max(1.0, std::abs(t));
}

/**
 * @brief Central-difference gradient of a scalar function of a vector.
 *
 * Coordinates where the function evaluates non-finite at v ± h eᵢ retry with
 * a halved step (up to @p max_shrink times); if still non-finite the entry is
 * set to NaN so callers can detect the failure.  @p step_scale multiplies the
 * base step, letting callers compare stencils of different widths (a cheap
 * truncation-error estimate).
 */
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& v,
                       int max_shrink = 30, double step_scale = 1.0) {
  Vec g(v.size());
  Vec w = v;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double h = step_scale * fd_step(v[i]);
    double d = std::numeric_limits<double>::quiet_NaN();
    for (int s = 0; s < max_shrink; ++s) {
      w[i] = v[i] + h;
      const double fp = f(w);
      w[i] = v[i] - h;
      const double fm = f(w);
      w[i] = v[i];
      if (std::isfinite(fp) && std::isfinite(fm)) {
        d = (fp - fm) / (2.0 * h);
        break;
      }
      h *= 0.5;
    }
    g[i] = d;
  }
  return g;
}

/**
 * @brief Central-difference Jacobian of a vector function (rows = outputs).
 */
inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& v) {
  Vec w = v;
  const Vec f0 = f(v);
  Mat J(f0.size(), v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double h = fd_step(v[i]);
    w[i] = v[i] + h;
    const Vec fp = f(w);
    w[i] = v[i] - h;
    const Vec fm = f(w);
    w[i] = v[i];
    J.col(i) = (fp - fm) / (2.0 * h);
  }
  return J;
}

/**
 * @brief Symmetrized central-difference Hessian of a gradient field.
 *
 * Differentiates an analytic (or otherwise exact) gradient and returns
 * (J + Jᵀ)/2, the standard way to expose the curvature of a C² function
 * without analytic second derivatives.
 */
inline Mat fd_hessian_from_gradient(const std::function<Vec(const Vec&)>& grad,
                                    const Vec& v) {
  const Mat J = fd_jacobian(grad, v);
  return 0.5 * (J + J.transpose());
}

/// Mixed absolute/relative mismatch with unit floor:
/// max_i |a_i − b_i| / max(1, |a_i|, |b_i|).
inline double rel_error(const Vec& a, const Vec& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double scale =
        std::max(1.0, std::max(std::abs(a[i]), std::abs(b[i])));
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

}  // namespace exal
