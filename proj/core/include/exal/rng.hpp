// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "exal/types.hpp"

namespace exal {

/**
 * @brief Deterministic random source.
 *
 * Wraps std::mt19937_64 (whose output sequence is pinned by the standard) and
 * derives doubles with explicit arithmetic instead of the standard-library
 * distributions, which are implementation-defined.  Same seed ⇒ same stream
 * of samples on every conforming toolchain, which the reproducibility
 * contract of the CLI relies on.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box–Muller (deterministic for a given seed).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    // Guard the log singularity at u1 == 0.
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  /// Vector with i.i.d. uniform entries in [lo, hi).
  Vec uniform_vec(Eigen::Index n, double lo, double hi) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  /// Vector with i.i.d. standard normal entries.
  Vec normal_vec(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n) { return eng_() % n; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace exal
