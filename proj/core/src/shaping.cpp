// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#include "exal/shaping.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "exal/fd.hpp"
#include "exal/rng.hpp"

namespace exal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_param(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::string Phi::describe() const {
  if (kind == "barrier" && barrier_alpha)
    return "barrier:" + fmt_param(*barrier_alpha);
  return kind;
}

std::string Psi::describe() const { return kind; }

Phi make_phi(const std::string& kind, const std::vector<double>& params) {
  Phi phi;
  if (kind == "linear") {
    phi.kind = "linear";
    phi.value = [](double t) { return t; };
    phi.deriv = [](double) { return 1.0; };
    phi.phi0 = 1.0;
  } else if (kind == "barrier") {
    if (params.empty())
      throw ContractViolation("make_phi: barrier needs a parameter alpha");
    const double alpha = params[0];
    if (!(alpha > 0.0))
      throw ContractViolation("make_phi: barrier needs alpha > 0");
    phi.kind = "barrier";
    phi.barrier_alpha = alpha;
    phi.value = [alpha](double t) {
      return t < alpha ? t / (alpha - t) : kInf;
    };
    phi.deriv = [alpha](double t) {
      return t < alpha ? alpha / ((alpha - t) * (alpha - t)) : kInf;
    };
    // t/(α−t) ≥ t/α on [0, α).
    phi.phi0 = 1.0 / alpha;
  } else if (kind == "exp") {
    phi.kind = "exp";
    phi.value = [](double t) { return std::expm1(t); };
    phi.deriv = [](double t) { return std::exp(t); };
    // e^t − 1 ≥ t.
    phi.phi0 = 1.0;
  } else {
    throw ContractViolation("make_phi: unknown kind '" + kind + "'");
  }
  return phi;
}

Psi make_psi(const std::string& kind, const std::vector<double>& params) {
  Psi psi;
  if (kind == "const") {
    const double beta = params.empty() ? 1.0 : params[0];
    if (!(beta > 0.0)) throw ContractViolation("make_psi: const needs beta > 0");
    psi.kind = "const:" + fmt_param(beta);
    psi.at_zero = beta;
    psi.value = [beta](const Vec&) { return beta; };
    psi.grad = [](const Vec& y) { return Vec(Vec::Zero(y.size())); };
  } else if (kind == "poly") {
    if (params.size() < 2)
      throw ContractViolation("make_psi: poly needs parameters beta,s");
    const double beta = params[0];
    const double s = params[1];
    if (!(beta > 0.0)) throw ContractViolation("make_psi: poly needs beta > 0");
    if (!(s > 1.0)) throw ContractViolation("make_psi: poly needs s > 1");
    psi.kind = "poly:" + fmt_param(beta) + "," + fmt_param(s);
    psi.at_zero = beta;
    psi.value = [beta, s](const Vec& y) {
      double acc = beta;
      for (Eigen::Index i = 0; i < y.size(); ++i)
        acc -= std::pow(y[i], s);
      return acc;
    };
    psi.grad = [s](const Vec& y) {
      Vec g(y.size());
      for (Eigen::Index i = 0; i < y.size(); ++i)
        g[i] = -s * std::pow(y[i], s - 1.0);
      return g;
    };
  } else {
    throw ContractViolation("make_psi: unknown kind '" + kind + "'");
  }
  return psi;
}

namespace {

std::vector<double> parse_params(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    try {
      out.push_back(std::stod(text.substr(pos, next - pos)));
    } catch (const std::exception&) {
      throw ContractViolation("shape spec: bad numeric parameter '" +
                              text.substr(pos, next - pos) + "'");
    }
    pos = next + 1;
  }
  return out;
}

}  // namespace

Phi parse_phi(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::vector<double> params =
      colon == std::string::npos ? std::vector<double>{}
                                 : parse_params(spec.substr(colon + 1));
  return make_phi(kind, params);
}

Psi parse_psi(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::vector<double> params =
      colon == std::string::npos ? std::vector<double>{}
                                 : parse_params(spec.substr(colon + 1));
  return make_psi(kind, params);
}

namespace {

void record(ShapeAxiomReport& rep, double magnitude, const char* what,
            double at) {
  rep.violations += 1;
  if (magnitude > rep.worst) {
    rep.worst = magnitude;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s violated by %.3e near t = %.6g", what,
                  magnitude, at);
    rep.worst_case = buf;
  }
}

}  // namespace

ShapeAxiomReport verify_shape_axioms(const Phi& phi, long long samples,
                                     std::uint64_t seed) {
  ShapeAxiomReport rep;
  Rng rng(seed);
  const double tol = 1e-9;

  // Upper end of the sampling window: stay inside a barrier domain and away
  // from exp overflow.
  double hi = 50.0;
  if (phi.barrier_alpha) hi = 0.98 * *phi.barrier_alpha;

  // φ(0) = 0.
  rep.samples += 1;
  if (!(std::abs(phi.value(0.0)) <= tol))
    record(rep, std::abs(phi.value(0.0)), "phi(0) = 0", 0.0);

  for (long long k = 0; k < samples; ++k) {
    double t1 = rng.uniform(0.0, hi);
    double t2 = rng.uniform(0.0, hi);
    if (t1 > t2) std::swap(t1, t2);
    const double v1 = phi.value(t1);
    const double v2 = phi.value(t2);

    // Nondecreasing.
    rep.samples += 1;
    if (!(v2 >= v1 - tol)) record(rep, v1 - v2, "monotonicity", t1);

    // Midpoint convexity.
    rep.samples += 1;
    const double mid = phi.value(0.5 * (t1 + t2));
    const double chord = 0.5 * (v1 + v2);
    if (!(mid <= chord + tol * std::max(1.0, std::abs(chord))))
      record(rep, mid - chord, "convexity", 0.5 * (t1 + t2));

    // Linear minorant φ(t) ≥ φ₀ t.
    if (phi.phi0) {
      rep.samples += 1;
      if (!(v1 >= *phi.phi0 * t1 - tol * std::max(1.0, t1)))
        record(rep, *phi.phi0 * t1 - v1, "linear minorant", t1);
    }

    // Derivative consistency (guard the window so t ± h stays in domain).
    const double h = fd_step(t1);
    if (t1 - h > 0.0 && t1 + h < hi) {
      rep.samples += 1;
      const double fd = (phi.value(t1 + h) - phi.value(t1 - h)) / (2.0 * h);
      const double an = phi.deriv(t1);
      const double scale = std::max(1.0, std::max(std::abs(fd), std::abs(an)));
      if (!(std::abs(fd - an) / scale <= 1e-6))
        record(rep, std::abs(fd - an) / scale, "derivative", t1);
    }
  }
  return rep;
}

ShapeAxiomReport verify_shape_axioms(const Psi& psi, long long samples,
                                     std::uint64_t seed, int dim) {
  ShapeAxiomReport rep;
  Rng rng(seed);
  const double tol = 1e-9;

  // ψ(0) > 0 and the stored value agrees with the evaluator.
  const Vec zero = Vec::Zero(dim);
  rep.samples += 1;
  if (!(psi.value(zero) > 0.0))
    record(rep, -psi.value(zero), "psi(0) > 0", 0.0);
  rep.samples += 1;
  if (std::abs(psi.value(zero) - psi.at_zero) > tol)
    record(rep, std::abs(psi.value(zero) - psi.at_zero), "at_zero field", 0.0);

  for (long long k = 0; k < samples; ++k) {
    const Vec y = rng.uniform_vec(dim, 0.0, 2.0);

    // ψ(y) ≤ ψ(0).
    rep.samples += 1;
    const double v = psi.value(y);
    if (!(v <= psi.at_zero + tol))
      record(rep, v - psi.at_zero, "psi <= psi(0)", y[0]);

    // Gradient consistency (interior points only: the clamp set y ≥ 0 has a
    // boundary where one-sided behaviour is allowed).
    bool interior = true;
    for (int i = 0; i < dim; ++i) interior = interior && y[i] > 1e-3;
    if (interior) {
      rep.samples += 1;
      const Vec an = psi.grad(y);
      const Vec fd = fd_gradient([&](const Vec& z) { return psi.value(z); }, y);
      const double err = rel_error(an, fd);
      if (!(err <= 1e-6)) record(rep, err, "gradient", y[0]);
    }
  }
  return rep;
}

}  // namespace exal
