// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#include "exal/alf.hpp"

#include <cmath>
#include <limits>

namespace exal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dims(const Problem& p, const PrimalDual& xi, const char* who) {
  if (xi.x.size() != p.n || xi.lam.size() != p.l || xi.mu.size() != p.m)
    throw ContractViolation(std::string(who) + ": point has wrong block sizes");
}

/// Everything the value and gradient assemblies share at one point.
struct Workspace {
  FirstOrder fo;
  Vec y;          // max{g, 0}
  double b = 0.0;
  double FF = 0.0;   // ‖F‖²
  double phiv = 0.0; // φ(‖F‖²)
  bool in_om = false;
  // Multiplier-dependent pieces (filled when in Ω):
  double p_val = 0.0;
  Vec q;
  // Lagrangian pieces:
  Vec hL_coord;  // ∇̂f + JFᵀλ + Jgᵀμ
  Vec vL;        // Hilbert ∇ₓL = G⁻¹ hL_coord
  Vec w;         // DF[∇ₓL] = JF·vL
  Vec svec;      // ⟨∇gᵢ,∇ₓL⟩ + gᵢ²μᵢ
  double eta = 0.0;
};

Workspace build(const Problem& p, const AlfConfig& cfg, const PrimalDual& xi) {
  Workspace ws;
  ws.fo = eval_first_order(p, xi.x);
  ws.y = ws.fo.g.cwiseMax(0.0);
  ws.b = cfg.psi.value(ws.y);
  ws.FF = ws.fo.F.squaredNorm();
  ws.phiv = cfg.phi.value(ws.FF);
  ws.in_om = ws.b > 0.0 && std::isfinite(ws.phiv);
  if (!ws.in_om) return ws;

  ws.p_val = ws.b / (1.0 + xi.mu.squaredNorm());
  ws.q = Vec(p.m);
  for (Eigen::Index i = 0; i < p.m; ++i)
    ws.q[i] = std::max(ws.fo.g[i], -(ws.p_val / cfg.c) * xi.mu[i]);

  ws.hL_coord = ws.fo.grad_f;
  if (p.l > 0) ws.hL_coord += ws.fo.JF.transpose() * xi.lam;
  if (p.m > 0) ws.hL_coord += ws.fo.Jg.transpose() * xi.mu;
  ws.vL = p.metric.riesz(ws.hL_coord);
  ws.w = ws.fo.JF * ws.vL;
  ws.svec = ws.fo.Jg * ws.vL;
  for (Eigen::Index i = 0; i < p.m; ++i)
    ws.svec[i] += ws.fo.g[i] * ws.fo.g[i] * xi.mu[i];
  ws.eta = 0.5 * ws.w.squaredNorm() + 0.5 * ws.svec.squaredNorm();
  return ws;
}

}  // namespace

bool in_omega(const Problem& p, const AlfConfig& cfg, const Vec& x) {
  const FirstOrder fo = eval_first_order(p, x);
  const double b = cfg.psi.value(fo.g.cwiseMax(0.0));
  return b > 0.0 && std::isfinite(cfg.phi.value(fo.F.squaredNorm()));
}

std::pair<double, double> inequality_scaling(const Problem& p,
                                             const AlfConfig& cfg,
                                             const Vec& x, const Vec& mu) {
  if (mu.size() != p.m)
    throw ContractViolation("inequality_scaling: mu has wrong dimension");
  const FirstOrder fo = eval_first_order(p, x);
  const double b = cfg.psi.value(fo.g.cwiseMax(0.0));
  if (!(b > 0.0) || !std::isfinite(cfg.phi.value(fo.F.squaredNorm())))
    throw ContractViolation("inequality_scaling: x is outside Omega");
  return {b, b / (1.0 + mu.squaredNorm())};
}

Vec shifted_residual(const Problem& p, const AlfConfig& cfg, const Vec& x,
                     const Vec& mu) {
  const auto [b, p_val] = inequality_scaling(p, cfg, x, mu);
  (void)b;
  const Vec g = p.m > 0 ? Vec(p.g(x)) : Vec(Vec::Zero(0));
  Vec q(p.m);
  for (Eigen::Index i = 0; i < p.m; ++i)
    q[i] = std::max(g[i], -(p_val / cfg.c) * mu[i]);
  return q;
}

double eta_value(const Problem& p, const PrimalDual& xi) {
  check_dims(p, xi, "eta_value");
  const FirstOrder fo = eval_first_order(p, xi.x);
  Vec hL = fo.grad_f;
  if (p.l > 0) hL += fo.JF.transpose() * xi.lam;
  if (p.m > 0) hL += fo.Jg.transpose() * xi.mu;
  const Vec vL = p.metric.riesz(hL);
  const Vec w = fo.JF * vL;
  Vec s = fo.Jg * vL;
  for (Eigen::Index i = 0; i < p.m; ++i)
    s[i] += fo.g[i] * fo.g[i] * xi.mu[i];
  return 0.5 * w.squaredNorm() + 0.5 * s.squaredNorm();
}

AlfEvaluation alf_value(const Problem& p, const AlfConfig& cfg,
                        const PrimalDual& xi) {
  check_dims(p, xi, "alf_value");
  const Workspace ws = build(p, cfg, xi);
  AlfEvaluation ev;
  ev.in_omega = ws.in_om;
  ev.f = ws.fo.f;
  ev.F = ws.fo.F;
  ev.g = ws.fo.g;
  ev.b = ws.b;
  if (!ws.in_om) {
    ev.value = kInf;
    ev.p = 0.0;
    ev.q = ws.y;
    ev.eta = 0.0;
    ev.infeasibility = ws.fo.F.norm() + ws.y.norm();
    return ev;
  }
  ev.p = ws.p_val;
  ev.q = ws.q;
  ev.eta = ws.eta;
  ev.infeasibility = ws.fo.F.norm() + ws.q.norm();
  ev.value = ws.fo.f + xi.lam.dot(ws.fo.F) +
             0.5 * cfg.c * (1.0 + xi.lam.squaredNorm()) * ws.phiv +
             xi.mu.dot(ws.q) +
             cfg.c / (2.0 * ws.p_val) * ws.q.squaredNorm() + ws.eta;
  return ev;
}

double alf_value_alt_form(const Problem& p, const AlfConfig& cfg,
                          const PrimalDual& xi) {
  check_dims(p, xi, "alf_value_alt_form");
  const Workspace ws = build(p, cfg, xi);
  if (!ws.in_om)
    throw ContractViolation("alf_value_alt_form: x is outside Omega");
  const double L =
      ws.fo.f + xi.lam.dot(ws.fo.F) + xi.mu.dot(ws.fo.g);
  double shifted = 0.0;  // |g|² − |min{0, g + (p/c)μ}|²
  for (Eigen::Index i = 0; i < p.m; ++i) {
    const double r =
        std::min(0.0, ws.fo.g[i] + (ws.p_val / cfg.c) * xi.mu[i]);
    shifted += ws.fo.g[i] * ws.fo.g[i] - r * r;
  }
  return L + 0.5 * cfg.c * (1.0 + xi.lam.squaredNorm()) * ws.phiv +
         cfg.c / (2.0 * ws.p_val) * shifted + ws.eta;
}

AlfGradient alf_gradient(const Problem& p, const AlfConfig& cfg,
                         const PrimalDual& xi, SecondOrderMode mode) {
  check_dims(p, xi, "alf_gradient");
  const Workspace ws = build(p, cfg, xi);
  if (!ws.in_om) throw ContractViolation("alf_gradient: x is outside Omega");

  // x-block: ∇ₓℒ = ∇ₓL + c(1+‖λ‖²)φ'(‖F‖²)DF*[F] + (c/p)Σᵢ qᵢ∇gᵢ
  //   − (c/2bp)|q|² Σᵢ ∂ψ/∂yᵢ(max{g,0}) ∇gᵢ
  //   + (D²F[∇ₓL, ·])*[DF[∇ₓL]] + (Dₓ∇ₓL)*[DF*[DF[∇ₓL]]]
  //   + Σᵢ sᵢ (D(∇gᵢ)*[∇ₓL] + (Dₓ∇ₓL)*[∇gᵢ] + 2gᵢμᵢ∇gᵢ),
  // with sᵢ = ⟨∇gᵢ,∇ₓL⟩ + gᵢ²μᵢ, assembled below as a coordinate covector
  // and mapped to the Hilbert gradient at the end.
  Vec gx_coord = ws.hL_coord;
  if (p.l > 0)
    gx_coord += cfg.c * (1.0 + xi.lam.squaredNorm()) * cfg.phi.deriv(ws.FF) *
                (ws.fo.JF.transpose() * ws.fo.F);
  if (p.m > 0) {
    gx_coord += (cfg.c / ws.p_val) * (ws.fo.Jg.transpose() * ws.q);
    const Vec psig = cfg.psi.grad(ws.y);
    gx_coord -= cfg.c / (2.0 * ws.b * ws.p_val) * ws.q.squaredNorm() *
                (ws.fo.Jg.transpose() * psig);
  }

  if (p.l + p.m > 0) {
    const SecondOrder so = mode == SecondOrderMode::analytic_only
                               ? eval_second_order(p, xi.x)
                               : eval_second_order_or_fd(p, xi.x);
    Mat HL = so.hess_f;
    for (Eigen::Index k = 0; k < p.l; ++k) HL += xi.lam[k] * so.hess_F[k];
    for (Eigen::Index i = 0; i < p.m; ++i) HL += xi.mu[i] * so.hess_g[i];

    // (D²F[∇ₓL,·])*[w]: Σₖ wₖ Hess(Fₖ)·∇ₓL.
    for (Eigen::Index k = 0; k < p.l; ++k)
      gx_coord += ws.w[k] * (so.hess_F[k] * ws.vL);
    // (Dₓ∇ₓL)*[DF*[w]] with DF*[w] = riesz(JFᵀw).
    if (p.l > 0)
      gx_coord += HL * p.metric.riesz(ws.fo.JF.transpose() * ws.w);
    // Σᵢ sᵢ (Hess(gᵢ)·∇ₓL + HL·∇gᵢ + 2gᵢμᵢ ∇̂gᵢ).
    if (p.m > 0) {
      for (Eigen::Index i = 0; i < p.m; ++i)
        gx_coord += ws.svec[i] * (so.hess_g[i] * ws.vL);
      gx_coord += HL * p.metric.riesz(ws.fo.Jg.transpose() * ws.svec);
      const Vec twogm =
          2.0 * ws.fo.g.cwiseProduct(xi.mu).cwiseProduct(ws.svec);
      gx_coord += ws.fo.Jg.transpose() * twogm;
    }
  }

  AlfGradient grad;
  grad.gx_coord = gx_coord;
  grad.gx = p.metric.riesz(gx_coord);

  // Multiplier blocks (first-order data only):
  //   (gλ; gμ) = (F + cφ(‖F‖²)λ; q + (c/b)|q|²μ) + 𝓔𝓔*(w; s),
  // where 𝓔𝓔*(w;s) = (JF·u; Jg·u + g²∘s) with u = riesz(JFᵀw + Jgᵀs).
  Vec stacked = Vec::Zero(p.n);
  if (p.l > 0) stacked += ws.fo.JF.transpose() * ws.w;
  if (p.m > 0) stacked += ws.fo.Jg.transpose() * ws.svec;
  const Vec u = p.metric.riesz(stacked);
  grad.glam = ws.fo.F + cfg.c * ws.phiv * xi.lam + ws.fo.JF * u;
  grad.gmu = ws.q + (cfg.c / ws.b) * ws.q.squaredNorm() * xi.mu + ws.fo.Jg * u;
  for (Eigen::Index i = 0; i < p.m; ++i)
    grad.gmu[i] += ws.fo.g[i] * ws.fo.g[i] * ws.svec[i];

  grad.norm = std::sqrt(grad.gx.dot(grad.gx_coord) + grad.glam.squaredNorm() +
                        grad.gmu.squaredNorm());
  return grad;
}

std::pair<Vec, Vec> alf_gradient_multipliers(const Problem& p,
                                             const AlfConfig& cfg,
                                             const PrimalDual& xi) {
  check_dims(p, xi, "alf_gradient_multipliers");
  const Workspace ws = build(p, cfg, xi);
  if (!ws.in_om)
    throw ContractViolation("alf_gradient_multipliers: x is outside Omega");
  Vec stacked = Vec::Zero(p.n);
  if (p.l > 0) stacked += ws.fo.JF.transpose() * ws.w;
  if (p.m > 0) stacked += ws.fo.Jg.transpose() * ws.svec;
  const Vec u = p.metric.riesz(stacked);
  Vec glam = ws.fo.F + cfg.c * ws.phiv * xi.lam + ws.fo.JF * u;
  Vec gmu = ws.q + (cfg.c / ws.b) * ws.q.squaredNorm() * xi.mu + ws.fo.Jg * u;
  for (Eigen::Index i = 0; i < p.m; ++i)
    gmu[i] += ws.fo.g[i] * ws.fo.g[i] * ws.svec[i];
  return {std::move(glam), std::move(gmu)};
}

AlfLowerBounds alf_lower_bounds(const Problem& p, const AlfConfig& cfg,
                                const PrimalDual& xi) {
  check_dims(p, xi, "alf_lower_bounds");
  if (!cfg.phi.phi0)
    throw LemmaHypothesisUnavailable(
        "lemma hypothesis unavailable: phi declares no minorant slope phi0");
  const Workspace ws = build(p, cfg, xi);
  if (!ws.in_om)
    throw ContractViolation("alf_lower_bounds: x is outside Omega");
  const double phi0 = *cfg.phi.phi0;
  const double psi0 = cfg.psi.at_zero;
  const double common = ws.fo.f + 0.5 * cfg.c * ws.phiv -
                        1.0 / (2.0 * cfg.c * phi0) + ws.eta;
  AlfLowerBounds lb;
  lb.bound1 = common + cfg.c / (2.0 * ws.b) * ws.q.squaredNorm() -
              psi0 / (2.0 * cfg.c);
  lb.bound2 = common + cfg.c / (2.0 * psi0) * ws.y.squaredNorm() -
              (1.0 + static_cast<double>(p.m)) * psi0 / (2.0 * cfg.c);
  return lb;
}

}  // namespace exal
