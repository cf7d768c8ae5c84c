// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#include "exal/h1.hpp"

namespace exal {

H1Fn H1Fn::zeros(double a, double b, int d, int N) {
  H1Fn f;
  f.a = a;
  f.b = b;
  f.values = Mat::Zero(N + 1, d);
  return f;
}

H1Fn H1Fn::sample(double a, double b, int d, int N,
                  const std::function<Vec(double)>& fn) {
  H1Fn f = zeros(a, b, d, N);
  for (int k = 0; k <= N; ++k) f.values.row(k) = fn(f.node(k)).transpose();
  return f;
}

Vec H1Fn::flatten() const {
  const int N1 = static_cast<int>(values.rows());
  const int d = static_cast<int>(values.cols());
  Vec v(N1 * d);
  for (int k = 0; k < N1; ++k)
    for (int j = 0; j < d; ++j) v[k * d + j] = values(k, j);
  return v;
}

H1Fn H1Fn::unflatten(const Vec& v, const H1Fn& like) {
  H1Fn f = like;
  const int N1 = static_cast<int>(like.values.rows());
  const int d = static_cast<int>(like.values.cols());
  if (v.size() != N1 * d)
    throw ContractViolation("H1Fn::unflatten: size mismatch");
  for (int k = 0; k < N1; ++k)
    for (int j = 0; j < d; ++j) f.values(k, j) = v[k * d + j];
  return f;
}

double h1_inner(const H1Fn& x, const H1Fn& y) {
  if (x.values.rows() != y.values.rows() ||
      x.values.cols() != y.values.cols())
    throw ContractViolation("h1_inner: grid mismatch");
  const int N = x.segments();
  const double len = x.b - x.a;
  const double dt = x.dt();

  double acc = x.values.row(0).dot(y.values.row(0));
  acc += (x.values.row(0) + x.values.row(N))
             .dot(y.values.row(0) + y.values.row(N));
  // (b−a) Σ_k ⟨Δx_k, Δy_k⟩/Δt (exact on piecewise-linear functions).
  double deriv = 0.0;
  for (int k = 0; k < N; ++k)
    deriv += (x.values.row(k + 1) - x.values.row(k))
                 .dot(y.values.row(k + 1) - y.values.row(k));
  acc += len * deriv / dt;
  return acc;
}

double y_inner(const Vec& y1, const Vec& y2, const Vec& z1, const Vec& z2) {
  return 3.0 * y1.dot(z1) + 2.0 * y2.dot(z2);
}

std::pair<Vec, Vec> h1_apply_A(const H1Fn& x) {
  const int N = x.segments();
  return {x.values.row(0).transpose(), x.values.row(N).transpose()};
}

H1Fn h1_apply_A_star(const Vec& y1, const Vec& y2, const H1Fn& like) {
  if (y1.size() != like.components() || y2.size() != like.components())
    throw ContractViolation("h1_apply_A_star: component mismatch");
  H1Fn out = like;
  const int N = like.segments();
  const double len = like.b - like.a;
  for (int k = 0; k <= N; ++k) {
    const double s = (like.node(k) - like.a) / len;
    out.values.row(k) = (y1 + (y2 - y1) * s).transpose();
  }
  return out;
}

Mat h1_gram(double a, double b, int d, int N) {
  const int n = (N + 1) * d;
  const double dt = (b - a) / N;
  const double w = (b - a) / dt;  // equals N on the uniform grid
  Mat G = Mat::Zero(n, n);
  for (int j = 0; j < d; ++j) {
    const int i0 = 0 * d + j;       // node 0, component j
    const int iN = N * d + j;       // node N, component j
    // ⟨x(a), y(a)⟩ term.
    G(i0, i0) += 1.0;
    // ⟨x(a)+x(b), y(a)+y(b)⟩ term (rank one per component).
    G(i0, i0) += 1.0;
    G(i0, iN) += 1.0;
    G(iN, i0) += 1.0;
    G(iN, iN) += 1.0;
    // Stiffness: (len/dt) Σ (x_{k+1}−x_k)(y_{k+1}−y_k).
    for (int k = 0; k < N; ++k) {
      const int ik = k * d + j;
      const int ik1 = (k + 1) * d + j;
      G(ik, ik) += w;
      G(ik1, ik1) += w;
      G(ik, ik1) -= w;
      G(ik1, ik) -= w;
    }
  }
  return G;
}

}  // namespace exal
