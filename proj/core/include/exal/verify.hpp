// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "exal/problem.hpp"

namespace exal {

/// Outcome of one named property check, aggregated over problems and samples.
struct CheckResult {
  std::string name;
  long long samples = 0;
  long long violations = 0;
  double worst = 0.0;       ///< largest error/defect observed (check-specific)
  std::string worst_case;   ///< where it happened, human-readable
};

struct VerifyConfig {
  std::uint64_t seed = 7;
};

/// Names of the available check suites ("all" plus the per-module suites).
std::vector<std::string> verify_suites();

/**
 * @brief Runs the named property suite and returns one result per check.
 *
 * Suites: "lemmas" (value-level identities, bounds and gradient consistency
 * of the augmented Lagrangian), "regularity" (gram/quadratic-form identities,
 * a_max behavior, multiplier recovery), "solver" (descent monotonicity,
 * warm starts, the gradient/infeasibility estimate, local exactness, the
 * degenerate-problem alarm), "problems" (registry self-consistency, the
 * boundary-trace adjoint identities, shape-function axioms), and "all".
 *
 * @param problems registry names to restrict to; empty = every problem a
 *        check is applicable to.
 * @throws ContractViolation on an unknown suite or problem name.
 */
std::vector<CheckResult> run_verify_suite(const std::string& suite,
                                          const std::vector<std::string>& problems,
                                          const VerifyConfig& cfg = {});

}  // namespace exal
