// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#include <doctest.h>

#include <cmath>
#include <limits>

#include "exal/alf.hpp"
#include "exal/regularity.hpp"
#include "exal/rng.hpp"
#include "exal/solver.hpp"
#include "test_util.hpp"

using namespace exal;
using testutil::vec;

TEST_SUITE("regularity") {

TEST_CASE("gram matrix hand values") {
  const Problem& p1 = registry_lookup("p1_eq");
  const Mat s1 = assemble_gram(p1, vec({0.3, -0.4}));
  REQUIRE(s1.rows() == 1);
  CHECK(s1(0, 0) == doctest::Approx(2.0).epsilon(1e-14));

  const Problem& p2 = registry_lookup("p2_ineq");
  const Mat s2 = assemble_gram(p2, vec({1.0}));
  CHECK(s2(0, 0) == doctest::Approx(1.0).epsilon(1e-14));

  const Problem& p4 = registry_lookup("p4_degenerate");
  const Mat s4 = assemble_gram(p4, vec({0.0, 1.0}));
  CHECK(s4(0, 0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("quadratic form hand values") {
  const Problem& p1 = registry_lookup("p1_eq");
  CHECK(q_form_value(p1, vec({0.2, 0.1}), vec({3.0}), Vec(0)) ==
        doctest::Approx(18.0).epsilon(1e-14));
  CHECK(q_form_value(p1, vec({0.2, 0.1}), vec({0.0}), Vec(0)) == 0.0);

  // At the active boundary of the inequality model Q(mu) = mu^2 / 2.
  const Problem& p2 = registry_lookup("p2_ineq");
  CHECK(q_form_value(p2, vec({1.0}), Vec(0), vec({0.8})) ==
        doctest::Approx(0.32).epsilon(1e-14));
}

TEST_CASE("quadratic form equals half the squared gram image") {
  Rng rng(23);
  for (const std::string& name : registry_names()) {
    const Problem& p = registry_lookup(name);
    for (int s = 0; s < 50; ++s) {
      const Vec x = [&] {
        Vec v(p.n);
        for (Eigen::Index i = 0; i < p.n; ++i)
          v[i] = rng.uniform(p.sample_lo[i], p.sample_hi[i]);
        return v;
      }();
      const Vec lam = rng.uniform_vec(p.l, -2.0, 2.0);
      const Vec mu = rng.uniform_vec(p.m, -2.0, 2.0);
      Vec v(p.l + p.m);
      v << lam, mu;
      const double direct = q_form_value(p, x, lam, mu);
      const double via_gram = 0.5 * (assemble_gram(p, x) * v).squaredNorm();
      CAPTURE(name);
      CHECK(std::abs(direct - via_gram) <=
            1e-10 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("regularity constant hand values") {
  CHECK(a_max(registry_lookup("p1_eq"), vec({0.7, 0.7})) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(a_max(registry_lookup("p2_ineq"), vec({1.0})) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(a_max(registry_lookup("p4_degenerate"), vec({0.0, 1.0})) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("regularity constant bounds the form on the unit sphere") {
  const Problem& p3 = registry_lookup("p3_mixed");
  Rng rng(29);
  for (int s = 0; s < 20; ++s) {
    const Vec x = rng.uniform_vec(2, -2.0, 2.0);
    const double a = a_max(p3, x);
    double sphere_min = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 2000; ++k) {
      Vec v = rng.normal_vec(2);
      if (v.norm() < 1e-12) continue;
      v /= v.norm();
      sphere_min =
          std::min(sphere_min, q_form_value(p3, x, v.segment(0, 1), v.segment(1, 1)));
    }
    CHECK(sphere_min + 1e-12 >= a);
  }
}

TEST_CASE("least-squares multiplier estimate hand values") {
  const Problem& p1 = registry_lookup("p1_eq");
  const auto est1 = multiplier_estimate(p1, vec({0.5, 0.5}));
  REQUIRE(est1.has_value());
  CHECK(est1->first[0] == doctest::Approx(-1.0).epsilon(1e-12));

  const auto est0 = multiplier_estimate(p1, vec({0.0, 0.0}));
  REQUIRE(est0.has_value());
  CHECK(std::abs(est0->first[0]) <= 1e-12);

  const Problem& p2 = registry_lookup("p2_ineq");
  const auto est2 = multiplier_estimate(p2, vec({1.0}));
  REQUIRE(est2.has_value());
  CHECK(est2->second[0] == doctest::Approx(2.0).epsilon(1e-12));

  // Degenerate equality: the gram matrix is singular at the solution.
  const Problem& p4 = registry_lookup("p4_degenerate");
  CHECK_FALSE(multiplier_estimate(p4, vec({0.0, 0.0})).has_value());
}

TEST_CASE("the estimate annihilates the stationarity penalty") {
  for (const char* name : {"p1_eq", "p2_ineq", "p3_mixed", "h1_boundary"}) {
    const Problem& p = registry_lookup(name);
    REQUIRE(p.known.has_value());
    const auto est = multiplier_estimate(p, p.known->x);
    REQUIRE(est.has_value());
    CAPTURE(name);
    CHECK(eta_value(p, PrimalDual{p.known->x, est->first, est->second}) <=
          1e-10);
  }
}

TEST_CASE("KKT residual blocks") {
  const Problem& p1 = registry_lookup("p1_eq");
  const KktResidual at_star =
      kkt_residual(p1, PrimalDual{p1.known->x, p1.known->lam, p1.known->mu});
  CHECK(at_star.total <= 1e-12);

  const KktResidual at_origin =
      kkt_residual(p1, PrimalDual{vec({0.0, 0.0}), vec({0.0}), Vec(0)});
  CHECK(at_origin.stationarity <= 1e-15);
  CHECK(at_origin.feasibility_eq == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(at_origin.total == doctest::Approx(1.0).epsilon(1e-15));

  const Problem& p2 = registry_lookup("p2_ineq");
  const KktResidual comp =
      kkt_residual(p2, PrimalDual{vec({1.0}), Vec(0), vec({-1.0})});
  CHECK(comp.feasibility_comp == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("stationarity penalty decomposition hand values") {
  const Problem& p1 = registry_lookup("p1_eq");
  const EtaDecomposition d = eta_decomposition(p1, vec({1.0, 0.0}));
  REQUIRE(d.Q1_lambda.size() == 1);
  CHECK(d.Q1_lambda[0] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(d.Q0 == doctest::Approx(2.0).epsilon(1e-14));

  const EtaDecomposition d0 = eta_decomposition(p1, vec({0.0, 0.0}));
  CHECK(d0.Q1_lambda.norm() == 0.0);
  CHECK(d0.Q0 == 0.0);
}

TEST_CASE("decomposition reconstructs the penalty exactly") {
  Rng rng(31);
  for (const std::string& name : registry_names()) {
    const Problem& p = registry_lookup(name);
    for (int s = 0; s < 100; ++s) {
      const PrimalDual xi = sample_point(p, rng);
      const EtaDecomposition d = eta_decomposition(p, xi.x);
      const double rebuilt = q_form_value(p, xi.x, xi.lam, xi.mu) +
                             d.Q1_lambda.dot(xi.lam) + d.Q1_mu.dot(xi.mu) +
                             d.Q0;
      const double direct = eta_value(p, xi);
      CAPTURE(name);
      CHECK(std::abs(rebuilt - direct) <=
            1e-10 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("second-order sufficiency at the certified triples") {
  const Problem& p1 = registry_lookup("p1_eq");
  const SoscReport r1 =
      sosc_check(p1, PrimalDual{p1.known->x, p1.known->lam, p1.known->mu});
  CHECK(r1.sosc_holds);
  CHECK(r1.strict_complementarity);
  CHECK(r1.cone_basis.cols() == 1);
  CHECK(r1.rho == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(r1.active_set.empty());

  // Active inequality with a strictly positive multiplier and an empty
  // critical cone: the condition holds vacuously.
  const Problem& p2 = registry_lookup("p2_ineq");
  const SoscReport r2 =
      sosc_check(p2, PrimalDual{p2.known->x, p2.known->lam, p2.known->mu});
  CHECK(r2.sosc_holds);
  CHECK(r2.strict_complementarity);
  CHECK(r2.cone_basis.cols() == 0);
  CHECK(std::isinf(r2.rho));
  REQUIRE(r2.active_set.size() == 1);
  CHECK(r2.active_set[0] == 0);

  // The saddle certificate fails with a negative reduced curvature.
  const Problem& ps = registry_lookup("p3_saddle");
  const SoscReport rs =
      sosc_check(ps, PrimalDual{ps.known->x, ps.known->lam, ps.known->mu});
  CHECK_FALSE(rs.sosc_holds);
  CHECK(rs.rho == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-10));

  const Problem& pm = registry_lookup("p3_mixed");
  const SoscReport rm =
      sosc_check(pm, PrimalDual{pm.known->x, pm.known->lam, pm.known->mu});
  CHECK(rm.sosc_holds);
  CHECK(rm.cone_basis.cols() == 0);
}

TEST_CASE("summary report at the equality model optimum") {
  const Problem& p1 = registry_lookup("p1_eq");
  const RegularityReport rep = regularity_report(p1, vec({0.5, 0.5}));
  REQUIRE(rep.gram.rows() == 1);
  CHECK(rep.gram(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rep.a_max == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.positive_definite);
  CHECK(rep.condition == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.active_set.empty());
  REQUIRE(rep.multiplier_estimate.has_value());
  CHECK(rep.multiplier_estimate->first[0] ==
        doctest::Approx(-1.0).epsilon(1e-12));

  const Problem& p4 = registry_lookup("p4_degenerate");
  const RegularityReport deg = regularity_report(p4, vec({0.0, 0.0}));
  CHECK_FALSE(deg.positive_definite);
  CHECK_FALSE(deg.multiplier_estimate.has_value());
  CHECK(std::isinf(deg.condition));
}

}  // TEST_SUITE
