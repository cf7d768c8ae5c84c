// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT
//
// End-to-end acceptance gate: twelve numbered checks covering the gradient
// oracle, stationarity at certified triples, exactness recovery, the
// lower-bound chain, the regularity quadratic form, multiplier recovery,
// monotonicity and form equivalence, the stationarity-penalty decomposition,
// the discrete trace operator, local convexity at the optimum, the
// gradient-infeasibility estimate, and the degenerate-constraint alarm.
// Prints one PASS/FAIL line per check and exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "exal/alf.hpp"
#include "exal/fd.hpp"
#include "exal/h1.hpp"
#include "exal/regularity.hpp"
#include "exal/rng.hpp"
#include "exal/solver.hpp"

using namespace exal;

namespace {

int g_failures = 0;

void report(int idx, bool ok, const std::string& what,
            const std::string& detail) {
  std::printf("%s criterion-%d %s%s%s\n", ok ? "PASS" : "FAIL", idx,
              what.c_str(), detail.empty() ? "" : ": ", detail.c_str());
  std::fflush(stdout);
  if (!ok) g_failures += 1;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

double seconds_since(
    const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

PrimalDual known_triple(const Problem& p) {
  return PrimalDual{p.known->x, p.known->lam, p.known->mu};
}

// --- criterion 1: analytic gradients vs central differences -----------------

void criterion_1() {
  const struct {
    const char* phi;
    const char* psi;
  } combos[] = {
      {"linear", "const:1"},     {"linear", "poly:1,2"},
      {"barrier:25", "const:1"}, {"barrier:25", "poly:1,2"},
      {"exp", "const:1"},        {"exp", "poly:1,2"},
  };
  long long violations = 0;
  double worst = 0.0;
  std::string worst_at;
  for (const std::string& name : registry_names()) {
    const Problem& p = registry_lookup(name);
    for (const auto& combo : combos) {
      AlfConfig cfg{1.0, parse_phi(combo.phi), parse_psi(combo.psi)};
      const GradCheckReport rep = gradient_check(p, cfg, 100, 1e-5, 1234);
      violations += rep.violations;
      if (rep.worst > worst) {
        worst = rep.worst;
        worst_at = name + " (" + combo.phi + "," + combo.psi + ")";
      }
    }
  }
  report(1, violations == 0,
         "analytic gradient matches finite differences on sampled interior "
         "points",
         violations == 0
             ? fmt("max rel err %.3e", worst) + " at " + worst_at
             : fmt("%g mismatches, worst %.3e", double(violations), worst));
}

// --- criterion 2: certified triples are stationary ---------------------------

void criterion_2() {
  double worst = 0.0;
  for (const std::string& name : registry_names()) {
    const Problem& p = registry_lookup(name);
    if (!p.known) continue;
    for (double c : {0.1, 1.0, 10.0, 100.0}) {
      AlfConfig cfg{c, make_phi("linear"), make_psi("const", {1.0})};
      worst = std::max(worst, alf_gradient(p, cfg, known_triple(p)).norm);
    }
  }
  report(2, worst <= 1e-8,
         "the penalty gradient vanishes at every certified triple",
         fmt("max |grad| %.3e over c in {0.1,...,100}", worst));
}

// --- criterion 3: exactness recovery under the penalty sweep -----------------

void criterion_3() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"p1_eq", "p2_ineq"}) {
    const Problem& p = registry_lookup(name);
    SolverConfig cfg;
    const auto t0 = std::chrono::steady_clock::now();
    const SweepTable table = exactness_sweep(p, cfg);
    const double elapsed = seconds_since(t0);
    bool recovered = table.threshold_c.has_value();
    if (recovered) {
      for (const SweepRow& row : table.rows) {
        if (row.c != *table.threshold_c) continue;
        recovered = recovered && row.converged && row.dist_to_kkt <= 1e-6 &&
                    std::abs(row.alf_final - p.known->f_star) <= 1e-8;
      }
    }
    if (!recovered || elapsed > 10.0) ok = false;
    detail += std::string(name) + " threshold " +
              (table.threshold_c ? fmt("c=%g", *table.threshold_c)
                                 : std::string("absent")) +
              fmt(" in %.2fs; ", elapsed);
  }
  report(3, ok, "the penalty sweep recovers the certified triples", detail);
}

// --- criterion 4: the lower-bound chain --------------------------------------

void criterion_4() {
  const struct {
    const char* phi;
    std::vector<double> params;
  } phis[] = {{"linear", {}}, {"barrier", {4.0}}, {"exp", {}}};
  long long violations = 0;
  double worst_gap = 0.0;
  for (const std::string& name : registry_names()) {
    const Problem& p = registry_lookup(name);
    for (const auto& ph : phis) {
      AlfConfig cfg{2.0, make_phi(ph.phi, ph.params),
                    make_psi("const", {1.0})};
      Rng rng(4040);
      for (int s = 0; s < 1000; ++s) {
        const PrimalDual xi = sample_omega_point(p, cfg, rng);
        const double v = alf_value(p, cfg, xi).value;
        const AlfLowerBounds lb = alf_lower_bounds(p, cfg, xi);
        const double slack =
            1e-12 * std::max({1.0, std::abs(v), std::abs(lb.bound1),
                              std::abs(lb.bound2)});
        const double gap = std::max(lb.bound1 - v, lb.bound2 - lb.bound1);
        worst_gap = std::max(worst_gap, gap);
        if (gap > slack) violations += 1;
      }
    }
  }
  report(4, violations == 0,
         "the two-level lower bound holds on sampled interior points",
         violations == 0
             ? fmt("18000 samples, worst defect %.3e", worst_gap)
             : fmt("%g violations, worst defect %.3e", double(violations),
                   worst_gap));
}

// --- criterion 5: quadratic form vs gram matrix, and the sphere minimum ------

void criterion_5() {
  long long violations = 0;
  double worst = 0.0;
  Rng rng(5050);
  for (const std::string& name : registry_names()) {
    const Problem& p = registry_lookup(name);
    for (int s = 0; s < 100; ++s) {
      Vec x(p.n);
      for (Eigen::Index i = 0; i < p.n; ++i)
        x[i] = rng.uniform(p.sample_lo[i], p.sample_hi[i]);
      const Vec lam = rng.uniform_vec(p.l, -2.0, 2.0);
      const Vec mu = rng.uniform_vec(p.m, -2.0, 2.0);
      Vec v(p.l + p.m);
      v << lam, mu;
      const double direct = q_form_value(p, x, lam, mu);
      const double via_gram = 0.5 * (assemble_gram(p, x) * v).squaredNorm();
      const double err = std::abs(direct - via_gram) /
                         std::max(1.0, std::abs(direct));
      worst = std::max(worst, err);
      if (err > 1e-10) violations += 1;
    }
  }

  // Eigenvalue route vs brute force on the unit sphere of the multiplier
  // space, at the certified point and the default start of each problem.
  double worst_sphere = 0.0;
  for (const std::string& name : registry_names()) {
    const Problem& p = registry_lookup(name);
    std::vector<Vec> points{p.start.x};
    if (p.known) points.push_back(p.known->x);
    for (const Vec& x : points) {
      const Eigen::Index dim = p.l + p.m;
      const double a = a_max(p, x);
      double sphere_min = std::numeric_limits<double>::infinity();
      if (dim == 1) {
        for (double sign : {1.0, -1.0}) {
          Vec v(1);
          v << sign;
          sphere_min = std::min(
              sphere_min, q_form_value(p, x, v.segment(0, p.l),
                                       v.segment(p.l, p.m)));
        }
      } else {
        for (int k = 0; k < 10000; ++k) {
          const double theta = 2.0 * 3.141592653589793 * k / 10000.0;
          Vec v(2);
          v << std::cos(theta), std::sin(theta);
          sphere_min = std::min(
              sphere_min, q_form_value(p, x, v.segment(0, p.l),
                                       v.segment(p.l, p.m)));
        }
      }
      const double rel =
          std::abs(sphere_min - a) / std::max(a, 1e-12);
      worst_sphere = std::max(worst_sphere, rel);
      if (rel > 1e-3) violations += 1;
    }
  }
  report(5, violations == 0,
         "the quadratic form matches its gram matrix and the sphere minimum "
         "matches the eigenvalue",
         fmt("worst form err %.3e, worst sphere err %.3e", worst,
             worst_sphere));
}

// --- criterion 6: multiplier recovery at certified points --------------------

void criterion_6() {
  bool ok = true;
  double worst = 0.0, worst_eta = 0.0;
  for (const std::string& name : registry_names()) {
    const Problem& p = registry_lookup(name);
    if (!p.known) continue;
    if (a_max(p, p.known->x) <= 1e-10) continue;
    const auto est = multiplier_estimate(p, p.known->x);
    if (!est) {
      ok = false;
      continue;
    }
    double err = 0.0;
    if (p.l > 0) err = (est->first - p.known->lam).lpNorm<Eigen::Infinity>();
    if (p.m > 0)
      err = std::max(err,
                     (est->second - p.known->mu).lpNorm<Eigen::Infinity>());
    const double eta =
        eta_value(p, PrimalDual{p.known->x, est->first, est->second});
    worst = std::max(worst, err);
    worst_eta = std::max(worst_eta, eta);
    if (err > 1e-8 || eta > 1e-10) ok = false;
  }
  report(6, ok,
         "the least-squares estimate recovers the certified multipliers",
         fmt("worst multiplier err %.3e, worst eta %.3e", worst, worst_eta));
}

// --- criterion 7: monotonicity in c and equality of the two forms ------------

void criterion_7() {
  const double cs[] = {0.3, 1.0, 5.0, 40.0};
  long long mono_viol = 0, form_viol = 0;
  double worst_drop = 0.0, worst_form = 0.0;
  for (const std::string& name : registry_names()) {
    const Problem& p = registry_lookup(name);
    AlfConfig probe{1.0, make_phi("linear"), make_psi("const", {1.0})};
    Rng rng(7070);
    for (int s = 0; s < 500; ++s) {
      const PrimalDual xi = sample_omega_point(p, probe, rng);
      double prev = -std::numeric_limits<double>::infinity();
      for (double c : cs) {
        AlfConfig cfg{c, probe.phi, probe.psi};
        const double v = alf_value(p, cfg, xi).value;
        if (v < prev - 1e-12) {
          mono_viol += 1;
          worst_drop = std::max(worst_drop, prev - v);
        }
        prev = v;
        const double alt = alf_value_alt_form(p, cfg, xi);
        const double err =
            std::abs(v - alt) / std::max({1.0, std::abs(v), std::abs(alt)});
        worst_form = std::max(worst_form, err);
        if (err > 1e-10) form_viol += 1;
      }
    }
  }
  report(7, mono_viol == 0 && form_viol == 0,
         "the penalty is nondecreasing in c and both closed forms agree",
         fmt("worst drop %.3e, worst form err %.3e", worst_drop, worst_form));
}

// --- criterion 8: penalty decomposition and the shifted-residual identity ----

void criterion_8() {
  long long decomp_viol = 0, ident_viol = 0;
  double worst_decomp = 0.0, worst_ident = 0.0;
  for (const std::string& name : registry_names()) {
    const Problem& p = registry_lookup(name);
    Rng rng(8080);
    for (int s = 0; s < 500; ++s) {
      const PrimalDual xi = sample_point(p, rng);
      const EtaDecomposition d = eta_decomposition(p, xi.x);
      const double rebuilt = q_form_value(p, xi.x, xi.lam, xi.mu) +
                             d.Q1_lambda.dot(xi.lam) + d.Q1_mu.dot(xi.mu) +
                             d.Q0;
      const double direct = eta_value(p, xi);
      const double derr = std::abs(rebuilt - direct) /
                          std::max(1.0, std::abs(direct));
      worst_decomp = std::max(worst_decomp, derr);
      if (derr > 1e-10) decomp_viol += 1;
    }

    if (p.m == 0) continue;
    AlfConfig cfg{1.0, make_phi("linear"), make_psi("const", {1.0})};
    Rng rng2(8081);
    for (int s = 0; s < 500; ++s) {
      const PrimalDual xi = sample_omega_point(p, cfg, rng2);
      const auto [b, pp] = inequality_scaling(p, cfg, xi.x, xi.mu);
      const Vec q = shifted_residual(p, cfg, xi.x, xi.mu);
      const Vec g = eval_first_order(p, xi.x).g;
      for (Eigen::Index i = 0; i < p.m; ++i) {
        const double lhs = g[i] * xi.mu[i];
        const double rhs =
            xi.mu[i] * q[i] + (cfg.c / pp) * (q[i] - g[i]) * q[i];
        const double err = std::abs(lhs - rhs) /
                           std::max({1.0, std::abs(lhs), std::abs(rhs)});
        worst_ident = std::max(worst_ident, err);
        if (err > 1e-12) ident_viol += 1;
      }
    }
  }
  report(8, decomp_viol == 0 && ident_viol == 0,
         "the penalty decomposition and the shifted-residual identity hold",
         fmt("worst decomposition err %.3e, worst identity err %.3e",
             worst_decomp, worst_ident));
}

// --- criterion 9: the discrete trace operator --------------------------------

// Worst adjoint-identity defect over random pairs, normalized by the
// Cauchy–Schwarz scale ‖x‖_X ‖y‖_Y so it reads as an operator-norm defect.
double adjoint_identity_error(int N, Rng& rng) {
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    H1Fn x = H1Fn::zeros(0.0, 1.0, 1, N);
    for (int k = 0; k <= N; ++k) x.values(k, 0) = rng.uniform(-2.0, 2.0);
    const Vec y1 = rng.uniform_vec(1, -2.0, 2.0);
    const Vec y2 = rng.uniform_vec(1, -2.0, 2.0);
    const auto [ax1, ax2] = h1_apply_A(x);
    const double lhs = y_inner(ax1, ax2, y1, y2);
    const double rhs = h1_inner(x, h1_apply_A_star(y1, y2, x));
    const double scale = std::sqrt(h1_inner(x, x)) *
                         std::sqrt(std::max(y_inner(y1, y2, y1, y2), 1e-30));
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(scale, 1.0));
  }
  return worst;
}

void criterion_9() {
  Rng rng(9090);
  double worst_id = 0.0;
  for (int s = 0; s < 100; ++s) {
    const H1Fn like = H1Fn::zeros(0.0, 1.0, 2, 32);
    const Vec y1 = rng.uniform_vec(2, -3.0, 3.0);
    const Vec y2 = rng.uniform_vec(2, -3.0, 3.0);
    const auto [z1, z2] = h1_apply_A(h1_apply_A_star(y1, y2, like));
    worst_id = std::max(worst_id, std::max((z1 - y1).lpNorm<Eigen::Infinity>(),
                                           (z2 - y2).lpNorm<Eigen::Infinity>()));
  }

  Rng rng32(9191), rng64(9191);
  const double e32 = adjoint_identity_error(32, rng32);
  const double e64 = adjoint_identity_error(64, rng64);
  // The adjoint is exact by construction, so both grids sit at roundoff; a
  // halving ratio is only meaningful when the defect is above roundoff.
  const bool halves = e64 >= 0.4 * e32 && e64 <= 0.6 * e32;
  const bool exact = std::max(e32, e64) <= 1e-13;
  report(9, worst_id <= 1e-12 && (halves || exact),
         "the trace adjoint composes to the identity and refines cleanly",
         fmt("max |AA*y - y| %.3e; ", worst_id) +
             fmt("adjoint defect %.3e -> %.3e under grid refinement", e32,
                 e64));
}

// --- criterion 10: the penalty is locally convex at the optimum --------------

void criterion_10() {
  const Problem& p = registry_lookup("p1_eq");
  AlfConfig cfg{100.0, make_phi("linear"), make_psi("const", {1.0})};
  const auto grad_stack = [&](const Vec& z) {
    const AlfGradient g =
        alf_gradient(p, cfg, PrimalDual::unstack(z, p.n, p.l, p.m));
    Vec out(p.n + p.l + p.m);
    out << g.gx_coord, g.glam, g.gmu;
    return out;
  };
  const Mat H = fd_hessian_from_gradient(grad_stack, known_triple(p).stack());
  const Eigen::SelfAdjointEigenSolver<Mat> eig(H);
  const double lmin = eig.eigenvalues().minCoeff();
  report(10, lmin > 0.0,
         "the penalty Hessian is positive definite at the certified triple",
         fmt("min eigenvalue %.6g at c=100", lmin));
}

// --- criterion 11: the gradient dominates the infeasibility ------------------

void criterion_11() {
  bool all_ok = true;
  std::string detail;
  for (const char* name : {"p1_eq", "p2_ineq"}) {
    const Problem& p = registry_lookup(name);
    bool some_c = false;
    double best_c = 0.0;
    for (double c : {1e3, 1e4, 1e5, 1e6}) {
      AlfConfig cfg{c, make_phi("linear"), make_psi("const", {1.0})};
      const double gamma = alf_value(p, cfg, p.start).value;
      Rng rng(1111);
      long long kept = 0, viol = 0;
      for (int attempt = 0; attempt < 200000 && kept < 1000; ++attempt) {
        const PrimalDual xi = sample_point(p, rng);
        const AlfEvaluation ev = alf_value(p, cfg, xi);
        if (!ev.in_omega || ev.value > gamma) continue;
        kept += 1;
        const double lhs = alf_gradient(p, cfg, xi).norm;
        const double rhs = ev.F.norm() + ev.q.norm();
        if (lhs < rhs - 1e-9 * std::max(1.0, rhs)) viol += 1;
      }
      if (kept >= 1000 && viol == 0) {
        some_c = true;
        best_c = c;
        break;
      }
    }
    if (!some_c) all_ok = false;
    detail += std::string(name) +
              (some_c ? fmt(" holds at c=%g; ", best_c)
                      : std::string(" has no passing c; "));
  }
  report(11, all_ok,
         "the gradient norm dominates the infeasibility on sublevel samples",
         detail);
}

// --- criterion 12: degenerate constraints raise the alarm --------------------

void criterion_12() {
  const Problem& p = registry_lookup("p4_degenerate");
  SolverConfig cfg;
  const SolveReport rep = solve_adaptive(p, cfg);
  const bool ok = rep.termination == "c-cap-reached" && rep.cq_warning &&
                  rep.termination != "kkt-converged";
  report(12, ok, "the degenerate model trips the regularity alarm",
         "termination \"" + rep.termination + "\", alarm " +
             (rep.cq_warning ? "raised" : "missing"));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  std::printf("%s: %d of 12 criteria passed in %.1fs\n",
              g_failures == 0 ? "OK" : "FAILED", 12 - g_failures,
              seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
