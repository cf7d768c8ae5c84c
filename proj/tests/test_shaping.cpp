// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#include <doctest.h>

#include <cmath>
#include <limits>

#include "exal/shaping.hpp"
#include "test_util.hpp"

using namespace exal;
using testutil::vec;

TEST_SUITE("shaping") {

TEST_CASE("linear phi is the identity with slope one") {
  const Phi phi = make_phi("linear");
  CHECK(phi.value(0.0) == 0.0);
  CHECK(phi.value(2.0) == 2.0);
  CHECK(phi.deriv(2.0) == 1.0);
  REQUIRE(phi.phi0.has_value());
  CHECK(*phi.phi0 == 1.0);
  CHECK(phi.describe() == "linear");
  CHECK_FALSE(phi.barrier_alpha.has_value());
}

TEST_CASE("barrier phi blows up at its pole and is infinite beyond") {
  const Phi phi = make_phi("barrier", {1.0});
  CHECK(phi.value(0.0) == 0.0);
  CHECK(phi.value(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::isinf(phi.value(1.5)));
  CHECK(phi.value(1.5) > 0.0);
  CHECK(std::isinf(phi.value(1.0)));
  // phi'(t) = alpha/(alpha - t)^2.
  CHECK(phi.deriv(0.5) == doctest::Approx(4.0).epsilon(1e-14));
  REQUIRE(phi.barrier_alpha.has_value());
  CHECK(*phi.barrier_alpha == 1.0);
  CHECK(phi.describe() == "barrier:1");
}

TEST_CASE("exp phi vanishes at zero and grows like e^t - 1") {
  const Phi phi = make_phi("exp");
  CHECK(phi.value(0.0) == 0.0);
  CHECK(phi.value(1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  CHECK(phi.deriv(1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  REQUIRE(phi.phi0.has_value());
  CHECK(phi.describe() == "exp");
}

TEST_CASE("const psi is flat with zero gradient") {
  const Psi psi = make_psi("const", {1.0});
  CHECK(psi.at_zero == 1.0);
  CHECK(psi.value(vec({0.5, 2.0})) == 1.0);
  CHECK(psi.value(Vec::Zero(3)) == 1.0);
  CHECK(psi.grad(vec({0.5, 2.0})).norm() == 0.0);
  CHECK(psi.describe() == "const:1");
}

TEST_CASE("poly psi decays from beta with vanishing gradient at zero") {
  const Psi psi = make_psi("poly", {1.0, 2.0});
  CHECK(psi.at_zero == 1.0);
  CHECK(psi.value(vec({0.5})) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(psi.grad(vec({0.5}))[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(psi.grad(vec({0.0}))[0] == 0.0);
  CHECK(psi.value(Vec::Zero(4)) == 1.0);
  CHECK(psi.describe() == "poly:1,2");
}

TEST_CASE("constructors reject invalid parameters") {
  CHECK_THROWS_AS(make_phi("nope"), ContractViolation);
  CHECK_THROWS_AS(make_phi("barrier"), ContractViolation);
  CHECK_THROWS_AS(make_phi("barrier", {0.0}), ContractViolation);
  CHECK_THROWS_AS(make_phi("barrier", {-1.0}), ContractViolation);
  CHECK_THROWS_AS(make_psi("nope"), ContractViolation);
  CHECK_THROWS_AS(make_psi("const", {0.0}), ContractViolation);
  CHECK_THROWS_AS(make_psi("poly", {1.0}), ContractViolation);
  CHECK_THROWS_AS(make_psi("poly", {0.0, 2.0}), ContractViolation);
  CHECK_THROWS_AS(make_psi("poly", {1.0, 1.0}), ContractViolation);
}

TEST_CASE("spec strings parse to the canonical spellings") {
  CHECK(parse_phi("linear").describe() == "linear");
  CHECK(parse_phi("barrier:2").describe() == "barrier:2");
  CHECK(parse_phi("exp").describe() == "exp");
  CHECK(parse_psi("const").describe() == "const:1");
  CHECK(parse_psi("const:3").describe() == "const:3");
  CHECK(parse_psi("poly:1,2").describe() == "poly:1,2");
  CHECK_THROWS_AS(parse_phi("barrier:"), ContractViolation);
  CHECK_THROWS_AS(parse_psi("poly:1"), ContractViolation);
}

TEST_CASE("axiom audit accepts the stock shapes") {
  for (const char* spec : {"linear", "barrier:2", "exp"}) {
    const ShapeAxiomReport rep = verify_shape_axioms(parse_phi(spec), 1000, 42);
    CAPTURE(spec);
    CAPTURE(rep.worst_case);
    CHECK(rep.samples > 0);
    CHECK(rep.violations == 0);
  }
  for (const char* spec : {"const:1", "poly:1,2", "poly:2,3"}) {
    const ShapeAxiomReport rep =
        verify_shape_axioms(parse_psi(spec), 1000, 42, 3);
    CAPTURE(spec);
    CAPTURE(rep.worst_case);
    CHECK(rep.samples > 0);
    CHECK(rep.violations == 0);
  }
}

TEST_CASE("axiom audit flags a decreasing custom phi") {
  Phi bad;
  bad.kind = "custom";
  bad.value = [](double t) { return -t; };  // negative, decreasing, concave
  bad.deriv = [](double) { return -1.0; };
  bad.phi0 = 1.0;  // claimed minorant is violated everywhere
  const ShapeAxiomReport rep = verify_shape_axioms(bad, 200, 7);
  CHECK(rep.violations > 0);
  CHECK_FALSE(rep.worst_case.empty());
}

TEST_CASE("axiom audit flags a psi that exceeds its value at zero") {
  Psi bad;
  bad.kind = "custom";
  bad.at_zero = 1.0;
  bad.value = [](const Vec& y) { return 1.0 + y.squaredNorm(); };
  bad.grad = [](const Vec& y) { return Vec(2.0 * y); };
  const ShapeAxiomReport rep = verify_shape_axioms(bad, 200, 7, 2);
  CHECK(rep.violations > 0);
}

}  // TEST_SUITE
