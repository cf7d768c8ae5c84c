// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#include <doctest.h>

#include <cmath>
#include <limits>

#include "exal/alf.hpp"
#include "exal/fd.hpp"
#include "exal/rng.hpp"
#include "exal/solver.hpp"
#include "test_util.hpp"

using namespace exal;
using testutil::vec;

namespace {

AlfConfig default_cfg(double c) {
  return AlfConfig{c, make_phi("linear"), make_psi("const", {1.0})};
}

PrimalDual known_triple(const Problem& p) {
  REQUIRE(p.known.has_value());
  return PrimalDual{p.known->x, p.known->lam, p.known->mu};
}

}  // namespace

TEST_SUITE("alf") {

TEST_CASE("domain membership follows the shapes") {
  const Problem& p1 = registry_lookup("p1_eq");
  CHECK(in_omega(p1, default_cfg(1.0), vec({9.0, 9.0})));

  AlfConfig barrier{1.0, make_phi("barrier", {1.0}), make_psi("const", {1.0})};
  const double root = 1.0 + std::sqrt(1.5);  // ‖F‖² = 1.5 beyond the pole
  CHECK_FALSE(in_omega(p1, barrier, vec({root, 0.0})));
  CHECK(in_omega(p1, barrier, vec({0.6, 0.6})));

  const Problem& p2 = registry_lookup("p2_ineq");
  AlfConfig poly{1.0, make_phi("linear"), make_psi("poly", {1.0, 2.0})};
  CHECK_FALSE(in_omega(p2, poly, vec({-1.0})));  // g = 2 makes b = -3
  CHECK(in_omega(p2, poly, vec({0.5})));
}

TEST_CASE("inequality scaling pair (b, p)") {
  const Problem& p2 = registry_lookup("p2_ineq");
  const AlfConfig cfg = default_cfg(1.0);
  auto [b1, s1] = inequality_scaling(p2, cfg, vec({1.0}), vec({1.0}));
  CHECK(b1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s1 == doctest::Approx(0.5).epsilon(1e-15));
  auto [b2, s2] = inequality_scaling(p2, cfg, vec({1.0}), vec({0.0}));
  CHECK(s2 == doctest::Approx(b2).epsilon(1e-15));
  auto [b3, s3] = inequality_scaling(p2, cfg, vec({1.0}), vec({4.0}));
  CHECK(s3 == doctest::Approx(1.0 / 17.0).epsilon(1e-15));

  AlfConfig poly{1.0, make_phi("linear"), make_psi("poly", {1.0, 2.0})};
  CHECK_THROWS_AS(inequality_scaling(p2, poly, vec({-1.0}), vec({0.0})),
                  ContractViolation);
}

TEST_CASE("shifted residual clamps at the scaled multiplier") {
  const Problem& p2 = registry_lookup("p2_ineq");
  const Vec q1 = shifted_residual(p2, default_cfg(1.0), vec({0.0}), vec({1.0}));
  CHECK(q1[0] == doctest::Approx(1.0).epsilon(1e-15));

  // mu = 0 clamps at zero: q = max{g, 0}.
  const Vec q2 = shifted_residual(p2, default_cfg(1.0), vec({2.0}), vec({0.0}));
  CHECK(q2[0] == 0.0);

  // g = -1, p = 1/17, c = 2, mu = 4: the shift -(p/c)mu = -2/17 wins.
  const Vec q3 = shifted_residual(p2, default_cfg(2.0), vec({2.0}), vec({4.0}));
  CHECK(q3[0] == doctest::Approx(-2.0 / 17.0).epsilon(1e-14));
}

TEST_CASE("stationarity penalty hand values") {
  const Problem& p1 = registry_lookup("p1_eq");
  CHECK(eta_value(p1, known_triple(p1)) <= 1e-20);
  CHECK(eta_value(p1, PrimalDual{vec({1.0, 0.0}), vec({0.0}), Vec(0)}) ==
        doctest::Approx(2.0).epsilon(1e-14));

  const Problem& p2 = registry_lookup("p2_ineq");
  CHECK(eta_value(p2, PrimalDual{vec({0.0}), Vec(0), vec({1.0})}) ==
        doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("penalty value at certified triples equals the objective") {
  const Problem& p1 = registry_lookup("p1_eq");
  for (double c : {0.5, 1.0, 7.0}) {
    const AlfEvaluation ev = alf_value(p1, default_cfg(c), known_triple(p1));
    CHECK(ev.in_omega);
    CHECK(ev.value == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ev.f == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ev.infeasibility <= 1e-15);
    CHECK(ev.eta <= 1e-20);
  }
}

TEST_CASE("penalty value hand examples") {
  const Problem& p1 = registry_lookup("p1_eq");
  const AlfEvaluation e1 =
      alf_value(p1, default_cfg(2.0), PrimalDual{vec({0.0, 0.0}), vec({0.0}), Vec(0)});
  CHECK(e1.value == doctest::Approx(1.0).epsilon(1e-14));

  const Problem& p2 = registry_lookup("p2_ineq");
  const AlfEvaluation e2 =
      alf_value(p2, default_cfg(1.0), PrimalDual{vec({0.0}), Vec(0), vec({1.0})});
  CHECK(e2.value == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(e2.b == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e2.p == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e2.q[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e2.eta == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("outside the domain the value is infinite but diagnostics remain") {
  const Problem& p1 = registry_lookup("p1_eq");
  AlfConfig barrier{1.0, make_phi("barrier", {1.0}), make_psi("const", {1.0})};
  const double root = 1.0 + std::sqrt(1.5);
  const PrimalDual xi{vec({root, 0.0}), vec({0.0}), Vec(0)};
  const AlfEvaluation ev = alf_value(p1, barrier, xi);
  CHECK_FALSE(ev.in_omega);
  CHECK(std::isinf(ev.value));
  CHECK(ev.value > 0.0);
  CHECK(ev.infeasibility == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
  CHECK_THROWS_AS(alf_value_alt_form(p1, barrier, xi), ContractViolation);
  CHECK_THROWS_AS(alf_gradient(p1, barrier, xi), ContractViolation);
  CHECK_THROWS_AS(alf_lower_bounds(p1, barrier, xi), ContractViolation);
}

TEST_CASE("both closed forms of the penalty agree on random points") {
  for (const std::string& name : registry_names()) {
    const Problem& p = registry_lookup(name);
    const AlfConfig cfg = default_cfg(3.0);
    Rng rng(101);
    for (int s = 0; s < 200; ++s) {
      const PrimalDual xi = sample_omega_point(p, cfg, rng);
      const double direct = alf_value(p, cfg, xi).value;
      const double alt = alf_value_alt_form(p, cfg, xi);
      CAPTURE(name);
      CAPTURE(s);
      CHECK(testutil::rel_err(direct, alt) <= 1e-10);
    }
  }
}

TEST_CASE("gradient vanishes at certified triples") {
  for (const std::string& name : registry_names()) {
    const Problem& p = registry_lookup(name);
    if (!p.known) continue;
    for (double c : {0.5, 10.0}) {
      const AlfGradient g = alf_gradient(p, default_cfg(c), known_triple(p));
      CAPTURE(name);
      CAPTURE(c);
      CHECK(g.norm <= 1e-10);
    }
  }
}

TEST_CASE("gradient matches central finite differences at hand points") {
  struct Case {
    const char* name;
    PrimalDual xi;
    double c;
  };
  const Case cases[] = {
      {"p1_eq", PrimalDual{vec({0.3, 0.2}), vec({0.1}), Vec(0)}, 1.0},
      {"p2_ineq", PrimalDual{vec({0.7}), Vec(0), vec({0.4})}, 2.0},
  };
  for (const Case& tc : cases) {
    const Problem& p = registry_lookup(tc.name);
    const AlfConfig cfg = default_cfg(tc.c);
    const AlfGradient g = alf_gradient(p, cfg, tc.xi);
    Vec analytic(p.n + p.l + p.m);
    analytic << g.gx_coord, g.glam, g.gmu;
    const Vec fd = fd_gradient(
        [&](const Vec& z) {
          return alf_value(p, cfg, PrimalDual::unstack(z, p.n, p.l, p.m)).value;
        },
        tc.xi.stack());
    for (Eigen::Index i = 0; i < analytic.size(); ++i) {
      CAPTURE(tc.name);
      CAPTURE(i);
      CHECK(testutil::rel_err(analytic[i], fd[i]) <= 1e-5);
    }
  }
}

TEST_CASE("multiplier gradient blocks agree with the full gradient") {
  const Problem& p3 = registry_lookup("p3_mixed");
  const AlfConfig cfg = default_cfg(2.0);
  Rng rng(7);
  for (int s = 0; s < 50; ++s) {
    const PrimalDual xi = sample_omega_point(p3, cfg, rng);
    const AlfGradient g = alf_gradient(p3, cfg, xi);
    const auto [glam, gmu] = alf_gradient_multipliers(p3, cfg, xi);
    CHECK((g.glam - glam).norm() <= 1e-14 * std::max(1.0, glam.norm()));
    CHECK((g.gmu - gmu).norm() <= 1e-14 * std::max(1.0, gmu.norm()));
  }
}

TEST_CASE("analytic-only second-order mode refuses stripped problems") {
  Problem p = registry_lookup("p1_eq");
  p.hess_f = nullptr;
  const PrimalDual xi{vec({0.3, 0.2}), vec({0.1}), Vec(0)};
  CHECK_THROWS_AS(
      alf_gradient(p, default_cfg(1.0), xi, SecondOrderMode::analytic_only),
      SecondOrderUnavailable);
  // The default mode falls back to finite differences and still matches.
  const AlfGradient g = alf_gradient(p, default_cfg(1.0), xi);
  const AlfGradient g_ref =
      alf_gradient(registry_lookup("p1_eq"), default_cfg(1.0), xi);
  CHECK((g.gx - g_ref.gx).norm() <= 1e-6);
}

TEST_CASE("penalty dominates its certified lower bounds") {
  const Problem& p1 = registry_lookup("p1_eq");
  const PrimalDual origin{vec({0.0, 0.0}), vec({0.0}), Vec(0)};
  const AlfLowerBounds lb = alf_lower_bounds(p1, default_cfg(2.0), origin);
  const double value = alf_value(p1, default_cfg(2.0), origin).value;
  CHECK(lb.bound2 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(value + 1e-12 >= lb.bound1);
  CHECK(lb.bound1 + 1e-12 >= lb.bound2);

  for (const char* name : {"p1_eq", "p2_ineq", "p3_mixed"}) {
    const Problem& p = registry_lookup(name);
    for (const char* phi : {"linear", "barrier:25"}) {
      AlfConfig cfg{1.7, parse_phi(phi), make_psi("const", {1.0})};
      Rng rng(301);
      for (int s = 0; s < 300; ++s) {
        const PrimalDual xi = sample_omega_point(p, cfg, rng);
        const double v = alf_value(p, cfg, xi).value;
        const AlfLowerBounds b = alf_lower_bounds(p, cfg, xi);
        const double slack =
            1e-12 * std::max({1.0, std::abs(v), std::abs(b.bound1)});
        CAPTURE(name);
        CAPTURE(phi);
        CHECK(v + slack >= b.bound1);
        CHECK(b.bound1 + slack >= b.bound2);
      }
    }
  }
}

TEST_CASE("lower bounds require a declared minorant slope") {
  Phi custom;
  custom.kind = "custom";
  custom.value = [](double t) { return t * t; };
  custom.deriv = [](double t) { return 2.0 * t; };
  AlfConfig cfg{1.0, custom, make_psi("const", {1.0})};
  const Problem& p1 = registry_lookup("p1_eq");
  CHECK_THROWS_AS(
      alf_lower_bounds(p1, cfg, PrimalDual{vec({0.0, 0.0}), vec({0.0}), Vec(0)}),
      LemmaHypothesisUnavailable);
}

TEST_CASE("penalty value is nondecreasing in c") {
  const double grid[] = {0.3, 1.0, 5.0, 40.0};
  for (const std::string& name : registry_names()) {
    const Problem& p = registry_lookup(name);
    Rng rng(211);
    const AlfConfig probe = default_cfg(1.0);
    for (int s = 0; s < 100; ++s) {
      const PrimalDual xi = sample_omega_point(p, probe, rng);
      double prev = -std::numeric_limits<double>::infinity();
      for (double c : grid) {
        const double v = alf_value(p, default_cfg(c), xi).value;
        CAPTURE(name);
        CAPTURE(c);
        CHECK(v + 1e-12 * std::max(1.0, std::abs(v)) >= prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("stationarity penalty is nonnegative on random points") {
  for (const std::string& name : registry_names()) {
    const Problem& p = registry_lookup(name);
    Rng rng(401);
    for (int s = 0; s < 100; ++s) {
      const PrimalDual xi = sample_point(p, rng);
      CHECK(eta_value(p, xi) >= 0.0);
    }
  }
}

}  // TEST_SUITE
