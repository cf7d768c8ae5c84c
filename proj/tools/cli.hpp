// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace exal::cli {

/**
 * @brief Runs one `exal` command line (without the program name) and writes
 * the report to `out` (or the --out file) and diagnostics to `err`.
 *
 * Commands: solve, sweep, check-grad, regularity, verify, list-problems.
 *
 * @return 0 on success, 1 on runtime failures (verification violations,
 *         unwritable output path, failed runs), 2 on usage errors (unknown
 *         flag, unknown problem, malformed values).
 */
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace exal::cli
