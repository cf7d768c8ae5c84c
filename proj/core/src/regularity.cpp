// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#include "exal/regularity.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <sstream>

namespace exal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::SelfAdjointEigenSolver<Mat> eigs_or_throw(const Mat& S,
                                                 const char* who) {
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  if (es.info() != Eigen::Success) {
    std::ostringstream oss;
    oss << who << ": numerical failure in the symmetric eigensolver; matrix:\n"
        << S;
    throw NumericalFailure(oss.str());
  }
  return es;
}

std::vector<int> active_indices(const Vec& g, double eps_act) {
  if (eps_act < 0.0) {
    const double scale = g.size() > 0 ? g.cwiseAbs().maxCoeff() : 0.0;
    eps_act = 1e-6 * std::max(1.0, scale);
  }
  std::vector<int> act;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    if (std::abs(g[i]) <= eps_act) act.push_back(static_cast<int>(i));
  return act;
}

}  // namespace

Mat assemble_gram(const Problem& p, const Vec& x) {
  const FirstOrder fo = eval_first_order(p, x);
  const Eigen::Index l = p.l, m = p.m;
  // Stack coordinate constraint Jacobians and apply G⁻¹ once.
  Mat C(l + m, p.n);
  if (l > 0) C.topRows(l) = fo.JF;
  if (m > 0) C.bottomRows(m) = fo.Jg;
  const Mat CGinv = p.metric.solve(C.transpose());  // n × (ℓ+m), G⁻¹Cᵀ
  Mat S = C * CGinv;
  for (Eigen::Index i = 0; i < m; ++i)
    S(l + i, l + i) += fo.g[i] * fo.g[i];
  // Exact symmetrization: C G⁻¹ Cᵀ is symmetric up to roundoff.
  S = 0.5 * (S + S.transpose());
  return S;
}

double q_form_value(const Problem& p, const Vec& x, const Vec& lam,
                    const Vec& mu) {
  if (lam.size() != p.l || mu.size() != p.m)
    throw ContractViolation("q_form_value: multiplier dimensions");
  const FirstOrder fo = eval_first_order(p, x);
  Vec covec = Vec::Zero(p.n);
  if (p.l > 0) covec += fo.JF.transpose() * lam;
  if (p.m > 0) covec += fo.Jg.transpose() * mu;
  const Vec z = p.metric.riesz(covec);  // DF*λ + Σ μᵢ∇gᵢ
  const Vec eq = fo.JF * z;
  Vec in = fo.Jg * z;
  for (Eigen::Index i = 0; i < p.m; ++i)
    in[i] += fo.g[i] * fo.g[i] * mu[i];
  return 0.5 * eq.squaredNorm() + 0.5 * in.squaredNorm();
}

double a_max(const Problem& p, const Vec& x) {
  const Mat S = assemble_gram(p, x);
  if (S.rows() == 0) return kInf;  // no constraints: Q vacuously coercive
  const auto es = eigs_or_throw(S, "a_max");
  const double lo = std::max(0.0, es.eigenvalues().minCoeff());
  return 0.5 * lo * lo;
}

std::optional<std::pair<Vec, Vec>> multiplier_estimate(const Problem& p,
                                                       const Vec& x,
                                                       double a_tol) {
  const Mat S = assemble_gram(p, x);
  const FirstOrder fo = eval_first_order(p, x);
  const Vec grad_h = p.metric.riesz(fo.grad_f);
  Vec rhs(p.l + p.m);
  if (p.l > 0) rhs.segment(0, p.l) = -(fo.JF * grad_h);
  if (p.m > 0) rhs.segment(p.l, p.m) = -(fo.Jg * grad_h);
  if (S.rows() == 0) return std::make_pair(Vec::Zero(0), Vec::Zero(0));
  const auto es = eigs_or_throw(S, "multiplier_estimate");
  if (es.eigenvalues().minCoeff() < a_tol) return std::nullopt;
  const Vec sol = es.eigenvectors() *
                  (es.eigenvalues().cwiseInverse().asDiagonal() *
                   (es.eigenvectors().transpose() * rhs));
  return std::make_pair(Vec(sol.segment(0, p.l)), Vec(sol.segment(p.l, p.m)));
}

KktResidual kkt_residual(const Problem& p, const PrimalDual& xi) {
  if (xi.x.size() != p.n || xi.lam.size() != p.l || xi.mu.size() != p.m)
    throw ContractViolation("kkt_residual: point has wrong block sizes");
  const FirstOrder fo = eval_first_order(p, xi.x);
  Vec hL = fo.grad_f;
  if (p.l > 0) hL += fo.JF.transpose() * xi.lam;
  if (p.m > 0) hL += fo.Jg.transpose() * xi.mu;
  KktResidual r;
  r.stationarity = p.metric.covector_norm(hL);
  r.feasibility_eq = fo.F.norm();
  double comp = 0.0;
  for (Eigen::Index i = 0; i < p.m; ++i) {
    const double v = std::max(fo.g[i], -xi.mu[i]);
    comp += v * v;
  }
  r.feasibility_comp = std::sqrt(comp);
  r.total = std::max({r.stationarity, r.feasibility_eq, r.feasibility_comp});
  return r;
}

EtaDecomposition eta_decomposition(const Problem& p, const Vec& x) {
  const FirstOrder fo = eval_first_order(p, x);
  const Vec grad_h = p.metric.riesz(fo.grad_f);
  const Vec a = fo.JF * grad_h;  // DF[∇f]
  const Vec d = fo.Jg * grad_h;  // ⟨∇gᵢ, ∇f⟩
  EtaDecomposition dec;
  Vec covec = Vec::Zero(p.n);
  if (p.l > 0) covec += fo.JF.transpose() * a;
  if (p.m > 0) covec += fo.Jg.transpose() * d;
  const Vec u = p.metric.riesz(covec);
  dec.Q1_lambda = fo.JF * u;
  dec.Q1_mu = fo.Jg * u;
  for (Eigen::Index i = 0; i < p.m; ++i)
    dec.Q1_mu[i] += d[i] * fo.g[i] * fo.g[i];
  dec.Q0 = 0.5 * a.squaredNorm() + 0.5 * d.squaredNorm();
  return dec;
}

SoscReport sosc_check(const Problem& p, const PrimalDual& xi, double eps_act,
                      double mu_tol) {
  const KktResidual kkt = kkt_residual(p, xi);
  if (!(kkt.total <= 1e-8))
    throw ContractViolation(
        "sosc_check: point fails the KKT residual precondition (total > 1e-8)");
  const SecondOrder so = eval_second_order(p, xi.x);  // strict: may throw
  const FirstOrder fo = eval_first_order(p, xi.x);

  SoscReport rep;
  rep.active_set = active_indices(fo.g, eps_act);
  rep.strict_complementarity = true;
  for (int i : rep.active_set)
    if (!(xi.mu[i] >= mu_tol)) rep.strict_complementarity = false;

  // Critical cone: null space of the stacked active constraint gradients.
  const Eigen::Index rows = p.l + static_cast<Eigen::Index>(rep.active_set.size());
  Mat T(rows, p.n);
  if (p.l > 0) T.topRows(p.l) = fo.JF;
  for (std::size_t k = 0; k < rep.active_set.size(); ++k)
    T.row(p.l + static_cast<Eigen::Index>(k)) = fo.Jg.row(rep.active_set[k]);

  Mat basis;
  if (rows == 0) {
    basis = Mat::Identity(p.n, p.n);
  } else {
    Eigen::FullPivLU<Mat> lu(T);
    basis = lu.kernel();  // n × k, k = dim null(T); Euclidean, not orthonormal
    if (lu.dimensionOfKernel() == 0) basis = Mat::Zero(p.n, 0);
  }

  if (basis.cols() == 0) {
    rep.cone_basis = Mat::Zero(p.n, 0);
    rep.reduced_hessian = Mat::Zero(0, 0);
    rep.rho = kInf;
    rep.sosc_holds = true;  // vacuous cone
    return rep;
  }

  // X-orthonormalize the kernel basis: Z = B R⁻¹ with BᵀGB = RᵀR.
  const Mat M = basis.transpose() * p.metric.gram(p.n) * basis;
  Eigen::LLT<Mat> llt(M);
  if (llt.info() != Eigen::Success)
    throw NumericalFailure("sosc_check: cone basis gram not SPD");
  const Mat R = llt.matrixU();
  const Mat Z =
      R.transpose().triangularView<Eigen::Lower>().solve(basis.transpose())
          .transpose();
  rep.cone_basis = Z;

  Mat HL = so.hess_f;
  for (Eigen::Index k = 0; k < p.l; ++k) HL += xi.lam[k] * so.hess_F[k];
  for (Eigen::Index i = 0; i < p.m; ++i) HL += xi.mu[i] * so.hess_g[i];
  Mat red = Z.transpose() * HL * Z;
  red = 0.5 * (red + red.transpose());
  rep.reduced_hessian = red;
  const auto es = eigs_or_throw(red, "sosc_check");
  rep.rho = es.eigenvalues().minCoeff();
  rep.sosc_holds = rep.rho > 0.0;
  return rep;
}

RegularityReport regularity_report(const Problem& p, const Vec& x,
                                   double a_tol) {
  RegularityReport rep;
  rep.gram = assemble_gram(p, x);
  const FirstOrder fo = eval_first_order(p, x);
  rep.active_set = active_indices(fo.g, -1.0);
  if (rep.gram.rows() == 0) {
    rep.a_max = kInf;
    rep.positive_definite = true;
    rep.condition = 1.0;
    rep.multiplier_estimate = std::make_pair(Vec::Zero(0), Vec::Zero(0));
    return rep;
  }
  const auto es = eigs_or_throw(rep.gram, "regularity_report");
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  rep.a_max = 0.5 * std::max(0.0, lo) * std::max(0.0, lo);
  rep.positive_definite = lo > a_tol;
  rep.condition = lo > 0.0 ? hi / lo : kInf;
  rep.multiplier_estimate = multiplier_estimate(p, x, a_tol);
  return rep;
}

}  // namespace exal
