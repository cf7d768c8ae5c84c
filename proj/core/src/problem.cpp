// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#include "exal/problem.hpp"

#include <cmath>

#include "exal/fd.hpp"
#include "exal/h1.hpp"

namespace exal {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ContractViolation(what);
}

void check_finite(double v, const char* component, const Problem& p) {
  if (!std::isfinite(v))
    throw NonFiniteEvaluation("non-finite evaluation in '" + p.name +
                              "': component " + component);
}

template <typename Derived>
void check_finite(const Eigen::MatrixBase<Derived>& v, const char* component,
                  const Problem& p) {
  if (!v.allFinite())
    throw NonFiniteEvaluation("non-finite evaluation in '" + p.name +
                              "': component " + component);
}

void check_symmetric(const Mat& H, const std::string& what) {
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ContractViolation(what + ": hessian not symmetric to 1e-12");
}

}  // namespace

FirstOrder eval_first_order(const Problem& p, const Vec& x) {
  require(x.size() == p.n, "eval_first_order: x has wrong dimension");
  FirstOrder fo;
  fo.f = p.f(x);
  check_finite(fo.f, "f", p);
  fo.grad_f = p.grad_f(x);
  require(fo.grad_f.size() == p.n, "eval_first_order: grad_f dimension");
  check_finite(fo.grad_f, "grad_f", p);

  if (p.l > 0) {
    fo.F = p.F(x);
    require(fo.F.size() == p.l, "eval_first_order: F dimension");
    check_finite(fo.F, "F", p);
    fo.JF = p.JF(x);
    require(fo.JF.rows() == p.l && fo.JF.cols() == p.n,
            "eval_first_order: JF dimension");
    check_finite(fo.JF, "JF", p);
  } else {
    fo.F = Vec::Zero(0);
    fo.JF = Mat::Zero(0, p.n);
  }

  if (p.m > 0) {
    fo.g = p.g(x);
    require(fo.g.size() == p.m, "eval_first_order: g dimension");
    check_finite(fo.g, "g", p);
    fo.Jg = p.Jg(x);
    require(fo.Jg.rows() == p.m && fo.Jg.cols() == p.n,
            "eval_first_order: Jg dimension");
    check_finite(fo.Jg, "Jg", p);
  } else {
    fo.g = Vec::Zero(0);
    fo.Jg = Mat::Zero(0, p.n);
  }
  return fo;
}

SecondOrder eval_second_order(const Problem& p, const Vec& x) {
  require(x.size() == p.n, "eval_second_order: x has wrong dimension");
  if (!p.has_second_order())
    throw SecondOrderUnavailable("second-order unavailable for problem '" +
                                 p.name + "'");
  SecondOrder so;
  so.hess_f = p.hess_f(x);
  require(so.hess_f.rows() == p.n && so.hess_f.cols() == p.n,
          "eval_second_order: hess_f dimension");
  check_finite(so.hess_f, "hess_f", p);
  check_symmetric(so.hess_f, "hess_f");
  so.hess_F.reserve(p.l);
  for (Eigen::Index k = 0; k < p.l; ++k) {
    Mat H = p.hess_F(x, k);
    require(H.rows() == p.n && H.cols() == p.n,
            "eval_second_order: hess_F dimension");
    check_finite(H, "hess_F", p);
    check_symmetric(H, "hess_F");
    so.hess_F.push_back(std::move(H));
  }
  so.hess_g.reserve(p.m);
  for (Eigen::Index i = 0; i < p.m; ++i) {
    Mat H = p.hess_g(x, i);
    require(H.rows() == p.n && H.cols() == p.n,
            "eval_second_order: hess_g dimension");
    check_finite(H, "hess_g", p);
    check_symmetric(H, "hess_g");
    so.hess_g.push_back(std::move(H));
  }
  return so;
}

SecondOrder eval_second_order_or_fd(const Problem& p, const Vec& x) {
  if (p.has_second_order()) return eval_second_order(p, x);
  SecondOrder so;
  so.hess_f = fd_hessian_from_gradient(
      [&p](const Vec& z) { return Vec(p.grad_f(z)); }, x);
  for (Eigen::Index k = 0; k < p.l; ++k) {
    so.hess_F.push_back(fd_hessian_from_gradient(
        [&p, k](const Vec& z) { return Vec(p.JF(z).row(k).transpose()); }, x));
  }
  for (Eigen::Index i = 0; i < p.m; ++i) {
    so.hess_g.push_back(fd_hessian_from_gradient(
        [&p, i](const Vec& z) { return Vec(p.Jg(z).row(i).transpose()); }, x));
  }
  return so;
}

Vec grad_lagrangian(const Problem& p, const PrimalDual& xi) {
  require(xi.lam.size() == p.l && xi.mu.size() == p.m,
          "grad_lagrangian: multiplier dimensions");
  const FirstOrder fo = eval_first_order(p, xi.x);
  Vec covec = fo.grad_f;
  if (p.l > 0) covec += fo.JF.transpose() * xi.lam;
  if (p.m > 0) covec += fo.Jg.transpose() * xi.mu;
  return p.metric.riesz(covec);
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

// min x₁² + x₂²  s.t.  x₁ + x₂ − 1 = 0.  Minimizer (1/2, 1/2), λ* = −1.
Problem make_p1_eq() {
  Problem p;
  p.name = "p1_eq";
  p.description = "quadratic objective, one linear equality";
  p.n = 2;
  p.l = 1;
  p.m = 0;
  p.f = [](const Vec& x) { return x.squaredNorm(); };
  p.grad_f = [](const Vec& x) { return Vec(2.0 * x); };
  p.F = [](const Vec& x) { return vec1(x[0] + x[1] - 1.0); };
  p.JF = [](const Vec&) {
    Mat J(1, 2);
    J << 1.0, 1.0;
    return J;
  };
  p.hess_f = [](const Vec&) { return Mat(2.0 * Mat::Identity(2, 2)); };
  p.hess_F = [](const Vec&, Eigen::Index) { return Mat(Mat::Zero(2, 2)); };
  p.known = KnownSolution{vec2(0.5, 0.5), vec1(-1.0), Vec::Zero(0), 0.5};
  p.start = PrimalDual{vec2(0.0, 0.0), vec1(0.0), Vec::Zero(0)};
  p.sample_lo = vec2(-2.0, -2.0);
  p.sample_hi = vec2(2.0, 2.0);
  p.multiplier_box = 3.0;
  return p;
}

// min x²  s.t.  1 − x ≤ 0.  Minimizer x* = 1, μ* = 2.
Problem make_p2_ineq() {
  Problem p;
  p.name = "p2_ineq";
  p.description = "quadratic objective, one linear inequality";
  p.n = 1;
  p.l = 0;
  p.m = 1;
  p.f = [](const Vec& x) { return x[0] * x[0]; };
  p.grad_f = [](const Vec& x) { return vec1(2.0 * x[0]); };
  p.g = [](const Vec& x) { return vec1(1.0 - x[0]); };
  p.Jg = [](const Vec&) {
    Mat J(1, 1);
    J << -1.0;
    return J;
  };
  p.hess_f = [](const Vec&) {
    Mat H(1, 1);
    H << 2.0;
    return H;
  };
  p.hess_g = [](const Vec&, Eigen::Index) { return Mat(Mat::Zero(1, 1)); };
  p.known = KnownSolution{vec1(1.0), Vec::Zero(0), vec1(2.0), 1.0};
  p.start = PrimalDual{vec1(0.0), Vec::Zero(0), vec1(1.0)};
  p.sample_lo = vec1(-2.0);
  p.sample_hi = vec1(2.0);
  return p;
}

// Shared hooks of the two circle problems:
// min x₁ + x₂  s.t.  x₁² + x₂² − 1 = 0,  −x₁ ≤ 0.
void fill_circle(Problem& p) {
  p.n = 2;
  p.l = 1;
  p.m = 1;
  p.f = [](const Vec& x) { return x[0] + x[1]; };
  p.grad_f = [](const Vec&) { return vec2(1.0, 1.0); };
  p.F = [](const Vec& x) { return vec1(x.squaredNorm() - 1.0); };
  p.JF = [](const Vec& x) {
    Mat J(1, 2);
    J << 2.0 * x[0], 2.0 * x[1];
    return J;
  };
  p.g = [](const Vec& x) { return vec1(-x[0]); };
  p.Jg = [](const Vec&) {
    Mat J(1, 2);
    J << -1.0, 0.0;
    return J;
  };
  p.hess_f = [](const Vec&) { return Mat(Mat::Zero(2, 2)); };
  p.hess_F = [](const Vec&, Eigen::Index) {
    return Mat(2.0 * Mat::Identity(2, 2));
  };
  p.hess_g = [](const Vec&, Eigen::Index) { return Mat(Mat::Zero(2, 2)); };
  p.start = PrimalDual{vec2(1.0, 0.0), vec1(0.0), vec1(0.0)};
  p.sample_lo = vec2(-2.0, -2.0);
  p.sample_hi = vec2(2.0, 2.0);
}

// Constrained minimizer branch: x* = (0, −1), λ* = 1/2, μ* = 1.
Problem make_p3_mixed() {
  Problem p;
  p.name = "p3_mixed";
  p.description = "linear objective on the unit circle with a sign constraint";
  fill_circle(p);
  p.known = KnownSolution{vec2(0.0, -1.0), vec1(0.5), vec1(1.0), -1.0};
  return p;
}

// Same functions; the certified triple is the other KKT point
// x* = (√2/2, √2/2), λ* = −√2/2, μ* = 0 — a constrained maximizer, so the
// reduced Hessian on the critical cone is negative there.
Problem make_p3_saddle() {
  Problem p;
  p.name = "p3_saddle";
  p.description =
      "circle problem certified at its non-minimizing KKT point";
  fill_circle(p);
  const double r = std::sqrt(0.5);
  p.known = KnownSolution{vec2(r, r), vec1(-r), vec1(0.0), 2.0 * r};
  return p;
}

// min x₁ + x₂²  s.t.  x₁² = 0.  Feasible set {x₁ = 0}; no KKT point exists
// (∇F vanishes on the feasible set, and ∇f never does), so constraint
// qualifications fail everywhere that matters.
Problem make_p4_degenerate() {
  Problem p;
  p.name = "p4_degenerate";
  p.description = "degenerate equality (squared): no KKT point exists";
  p.n = 2;
  p.l = 1;
  p.m = 0;
  p.f = [](const Vec& x) { return x[0] + x[1] * x[1]; };
  p.grad_f = [](const Vec& x) { return vec2(1.0, 2.0 * x[1]); };
  p.F = [](const Vec& x) { return vec1(x[0] * x[0]); };
  p.JF = [](const Vec& x) {
    Mat J(1, 2);
    J << 2.0 * x[0], 0.0;
    return J;
  };
  p.hess_f = [](const Vec&) {
    Mat H = Mat::Zero(2, 2);
    H(1, 1) = 2.0;
    return H;
  };
  p.hess_F = [](const Vec&, Eigen::Index) {
    Mat H = Mat::Zero(2, 2);
    H(0, 0) = 2.0;
    return H;
  };
  p.start = PrimalDual{vec2(1.0, 1.0), vec1(0.0), Vec::Zero(0)};
  p.sample_lo = vec2(-2.0, -2.0);
  p.sample_hi = vec2(2.0, 2.0);
  return p;
}

// Boundary-value model in discretized H¹([0,1]):
//   min ½‖x‖²_X  s.t.  x(0) − 1 = 0,  ½ − x(1) ≤ 0,
// on the uniform grid with N = 32 cells.  The X inner product is the
// boundary-weighted one of h1_gram; the minimizer is the affine function
// x*(t) = 1 − t/2 with λ* = −3, μ* = 1 and f* = 7/4 (exactly representable
// on every grid, so the discrete KKT residual vanishes to roundoff).
Problem make_h1_boundary() {
  const int N = 32;
  Problem p;
  p.name = "h1_boundary";
  p.description = "boundary-trace model problem in a discretized H1 metric";
  p.n = N + 1;
  p.l = 1;
  p.m = 1;
  Mat G = h1_gram(0.0, 1.0, 1, N);
  p.metric = Metric(G);
  // Capture the gram by value in the hooks that need it.
  p.f = [G](const Vec& x) { return 0.5 * x.dot(G * x); };
  p.grad_f = [G](const Vec& x) { return Vec(G * x); };
  p.hess_f = [G](const Vec&) { return G; };
  p.F = [](const Vec& x) { return vec1(x[0] - 1.0); };
  p.JF = [N](const Vec&) {
    Mat J = Mat::Zero(1, N + 1);
    J(0, 0) = 1.0;
    return J;
  };
  p.hess_F = [N](const Vec&, Eigen::Index) {
    return Mat(Mat::Zero(N + 1, N + 1));
  };
  p.g = [N](const Vec& x) { return vec1(0.5 - x[N]); };
  p.Jg = [N](const Vec&) {
    Mat J = Mat::Zero(1, N + 1);
    J(0, N) = -1.0;
    return J;
  };
  p.hess_g = [N](const Vec&, Eigen::Index) {
    return Mat(Mat::Zero(N + 1, N + 1));
  };
  Vec xstar(N + 1);
  for (int k = 0; k <= N; ++k)
    xstar[k] = 1.0 - 0.5 * (static_cast<double>(k) / N);
  p.known = KnownSolution{xstar, vec1(-3.0), vec1(1.0), 1.75};
  p.start = PrimalDual{Vec::Ones(N + 1), vec1(0.0), vec1(0.0)};
  p.sample_lo = Vec::Constant(N + 1, -2.0);
  p.sample_hi = Vec::Constant(N + 1, 2.0);
  p.multiplier_box = 4.0;
  return p;
}

const std::vector<Problem>& registry() {
  static const std::vector<Problem> problems = [] {
    std::vector<Problem> v;
    v.push_back(make_p1_eq());
    v.push_back(make_p2_ineq());
    v.push_back(make_p3_mixed());
    v.push_back(make_p3_saddle());
    v.push_back(make_p4_degenerate());
    v.push_back(make_h1_boundary());
    return v;
  }();
  return problems;
}

}  // namespace

std::vector<std::string> registry_names() {
  std::vector<std::string> names;
  for (const Problem& p : registry()) names.push_back(p.name);
  return names;
}

const Problem& registry_lookup(const std::string& name) {
  for (const Problem& p : registry())
    if (p.name == name) return p;
  std::string msg = "unknown problem '" + name + "'; available:";
  for (const Problem& p : registry()) msg += " " + p.name;
  throw UnknownProblem(msg);
}

}  // namespace exal
