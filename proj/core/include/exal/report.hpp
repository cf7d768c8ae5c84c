// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#pragma once

#include <string>
#include <vector>

#include "exal/regularity.hpp"
#include "exal/solver.hpp"
#include "exal/verify.hpp"

namespace exal {

/// One double as a raw token with 17 significant digits (%.17g), enough for
/// an exact binary round-trip.  Non-finite values print as inf/-inf/nan.
std::string format_double(double v);

/// JSON number token; non-finite values become the quoted strings "inf",
/// "-inf", "nan" (strict JSON has no non-finite literals).
std::string json_number(double v);

/// JSON string literal with the mandatory escapes applied.
std::string json_quote(const std::string& s);

/// Dense vector as a JSON array of numbers.
std::string json_vec(const Vec& v);

/// Dense matrix as a JSON array of row arrays.
std::string json_mat(const Mat& m);

/**
 * @brief Solve report as a JSON object with top-level keys
 * {problem, c_final, iterations, x, lambda, mu, kkt, alf_value, history,
 * termination} — stable order, stable formatting, byte-deterministic.
 */
std::string serialize_solve(const SolveReport& rep);

/// Sweep table as CSV with header
/// `c,start_id,converged,alf_final,dist_to_kkt,infeasibility,a_max_final`.
std::string serialize_sweep_csv(const SweepTable& table);

/// Sweep table as JSON ({problem, threshold_c, rows}).
std::string serialize_sweep_json(const SweepTable& table);

/// Gradient-audit report as JSON.
std::string serialize_grad_check(const std::string& problem,
                                 const GradCheckReport& rep);

/// Regularity report as JSON with fields {gram, a_max, positive_definite,
/// condition, active_set, multiplier_estimate} ("singular" when absent).
std::string serialize_regularity(const RegularityReport& rep);

/// Verification results as a JSON list of {check_name, samples, violations,
/// worst_case}.
std::string serialize_verify(const std::vector<CheckResult>& results);

}  // namespace exal
