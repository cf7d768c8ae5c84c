// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#pragma once

#include <Eigen/Cholesky>
#include <memory>

#include "exal/types.hpp"

namespace exal {

/**
 * @brief Inner product on the primal space X.
 *
 * Coordinates x ∈ ℝⁿ describe a point of X; the inner product is
 * ⟨u, v⟩_X = uᵀ G v for a fixed SPD Gram matrix G (identity by default, in
 * which case no matrix is stored).  Gradients of scalar functions are
 * returned by evaluators as coordinate covectors ∇̂f = (∂f/∂xᵢ); the Hilbert
 * gradient is the Riesz representative ∇f = G⁻¹ ∇̂f, so that
 * ⟨∇f, v⟩_X = ∇̂fᵀ v for every direction v.
 */
class Metric {
 public:
  /// Identity metric (Euclidean coordinates).
  Metric() = default;

  /// Metric with Gram matrix @p G (checked symmetric positive definite).
  explicit Metric(Mat G) {
    const double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
    if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw ContractViolation("Metric: gram matrix is not symmetric");
    auto data = std::make_shared<Data>();
    data->G = std::move(G);
    data->llt.compute(data->G);
    if (data->llt.info() != Eigen::Success)
      throw ContractViolation("Metric: gram matrix is not positive definite");
    data_ = std::move(data);
  }

  bool is_identity() const { return data_ == nullptr; }

  /// Riesz map: coordinate covector → Hilbert vector (G⁻¹ w).
  Vec riesz(const Vec& w) const {
    return data_ ? Vec(data_->llt.solve(w)) : w;
  }

  /// Applies G (Hilbert vector → coordinate covector).
  Vec flat(const Vec& v) const { return data_ ? Vec(data_->G * v) : v; }

  /// ⟨u, v⟩_X = uᵀ G v for Hilbert vectors u, v.
  double inner(const Vec& u, const Vec& v) const {
    return data_ ? u.dot(data_->G * v) : u.dot(v);
  }

  /// ‖v‖_X.
  double norm(const Vec& v) const { return std::sqrt(inner(v, v)); }

  /// Norm of a covector w: ‖G⁻¹w‖_X = √(wᵀ G⁻¹ w).
  double covector_norm(const Vec& w) const {
    return data_ ? std::sqrt(w.dot(data_->llt.solve(w))) : w.norm();
  }

  /// G⁻¹ applied columnwise.
  Mat solve(const Mat& rhs) const {
    return data_ ? Mat(data_->llt.solve(rhs)) : rhs;
  }

  /// The Gram matrix (identity materialized on demand for dimension @p n).
  Mat gram(Eigen::Index n) const {
    return data_ ? data_->G : Mat(Mat::Identity(n, n));
  }

 private:
  struct Data {
    Mat G;
    Eigen::LLT<Mat> llt;
  };
  // Shared so Problem values can be copied cheaply; the metric is immutable.
  std::shared_ptr<const Data> data_;
};

}  // namespace exal
