// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#include "cli.hpp"

#include <cerrno>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "exal/problem.hpp"
#include "exal/report.hpp"
#include "exal/shaping.hpp"
#include "exal/solver.hpp"
#include "exal/verify.hpp"

namespace exal::cli {
namespace {

/// Flag-value problems discovered after CLI11's grammar pass (bad vector
/// literals, dimension mismatches).  Reported like any other usage error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_number_list(const std::string& s, const char* flag) {
  std::vector<double> vals;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = s.find(',', pos);
    const std::string tok = s.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": bad vector literal '" + s +
                       "' (expected comma-separated decimals like 0.5,0.5)");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return vals;
}

/// "0.5,0.5" -> vector; "default" (or empty) -> nullopt, meaning "use the
/// problem's own value".
std::optional<Vec> parse_vec_literal(const std::string& s, const char* flag) {
  if (s.empty() || s == "default") return std::nullopt;
  const std::vector<double> vals = parse_number_list(s, flag);
  Vec v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = vals[i];
  return v;
}

Vec require_dim(std::optional<Vec> v, Eigen::Index want, const char* flag,
                const std::string& problem, const Vec& fallback) {
  if (!v) return fallback;
  if (v->size() != want)
    throw UsageError(std::string(flag) + ": expected " + std::to_string(want) +
                     " component(s) for " + problem + ", got " +
                     std::to_string(v->size()));
  return *v;
}

/// Writes `content` (with a trailing newline) to `path`, or to `out` when no
/// path was given.  Returns 0, or 1 with the OS error text on failure.
int emit(const std::string& content, const std::string& path,
         std::ostream& out, std::ostream& err) {
  std::string payload = content;
  if (payload.empty() || payload.back() != '\n') payload += '\n';
  if (path.empty()) {
    out << payload;
    return 0;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    err << "exal: cannot write '" << path << "': " << std::strerror(errno)
        << "\n";
    return 1;
  }
  f << payload;
  f.flush();
  if (!f) {
    err << "exal: error while writing '" << path
        << "': " << std::strerror(errno) << "\n";
    return 1;
  }
  return 0;
}

/// Solver tunables shared by `solve` and `sweep`, plus the bookkeeping
/// needed to let --tol seed both tolerances while the specific flags win.
struct SolverFlags {
  SolverConfig cfg;
  std::string phi_spec = "linear";
  std::string psi_spec = "const:1";
  double tol = 1e-8;
  CLI::Option* tol_opt = nullptr;
  CLI::Option* grad_tol_opt = nullptr;
  CLI::Option* kkt_tol_opt = nullptr;
};

void add_solver_flags(CLI::App* sub, SolverFlags& f) {
  sub->add_option("--phi", f.phi_spec,
                  "penalty shape: linear | barrier:a | exp")
      ->capture_default_str();
  sub->add_option("--psi", f.psi_spec,
                  "inequality scaling shape: const:b | poly:b,s")
      ->capture_default_str();
  sub->add_option("--c0", f.cfg.c0, "initial penalty value")
      ->capture_default_str();
  sub->add_option("--c-growth", f.cfg.c_growth,
                  "penalty growth factor between outer rounds")
      ->capture_default_str();
  sub->add_option("--c-max", f.cfg.c_max, "largest penalty value tried")
      ->capture_default_str();
  sub->add_option("--K", f.cfg.K,
                  "slope of the gradient/infeasibility lower-bound test")
      ->capture_default_str();
  f.tol_opt = sub->add_option(
      "--tol", f.tol, "sets both --grad-tol and --kkt-tol in one flag");
  f.grad_tol_opt =
      sub->add_option("--grad-tol", f.cfg.grad_tol,
                      "inner stationarity tolerance (product norm)")
          ->capture_default_str();
  f.kkt_tol_opt = sub->add_option("--kkt-tol", f.cfg.kkt_tol,
                                  "outer KKT residual tolerance")
                      ->capture_default_str();
  sub->add_option("--max-outer", f.cfg.max_outer,
                  "cap on penalty-update rounds")
      ->capture_default_str();
  sub->add_option("--max-inner", f.cfg.max_inner,
                  "cap on inner iterations per round")
      ->capture_default_str();
  sub->add_option("--inner", f.cfg.inner_method, "inner direction rule")
      ->check(CLI::IsMember({"quasi-newton-secant", "steepest-descent"}))
      ->capture_default_str();
  sub->add_option("--seed", f.cfg.seed, "seed for randomized starts")
      ->capture_default_str();
  sub->add_flag("--reseed-multipliers", f.cfg.reseed_multipliers,
                "re-estimate the multipliers after each penalty increase");
}

void finish_solver_flags(SolverFlags& f) {
  if (f.tol_opt->count() > 0) {
    if (f.grad_tol_opt->count() == 0) f.cfg.grad_tol = f.tol;
    if (f.kkt_tol_opt->count() == 0) f.cfg.kkt_tol = f.tol;
  }
  f.cfg.phi = parse_phi(f.phi_spec);
  f.cfg.psi = parse_psi(f.psi_spec);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

/**
 * @brief Applies a --config file of `key = value` lines as defaults.
 *
 * Every key becomes `--key=value` appended after the explicit arguments; a
 * key is dropped when the same flag was already given, so explicit flags
 * always win.  Comment lines (# or ;) and blank lines are ignored.
 */
std::vector<std::string> apply_config_defaults(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(std::strlen("--config="));
  }
  if (path.empty()) return args;
  std::ifstream f(path);
  if (!f)
    throw UsageError("cannot read config file '" + path +
                     "': " + std::strerror(errno));
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError("config file '" + path + "' line " +
                       std::to_string(lineno) +
                       ": expected `key = value`, got '" + t + "'");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    if (key.empty())
      throw UsageError("config file '" + path + "' line " +
                       std::to_string(lineno) + ": empty key");
    if (val.size() >= 2 &&
        ((val.front() == '"' && val.back() == '"') ||
         (val.front() == '\'' && val.back() == '\'')))
      val = val.substr(1, val.size() - 2);
    const std::string flag = "--" + key;
    bool overridden = false;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) {
        overridden = true;
        break;
      }
    if (!overridden) args.push_back(flag + "=" + val);
  }
  return args;
}

std::optional<PrimalDual> build_start(const Problem& p, const std::string& xs,
                                      const std::string& ls,
                                      const std::string& ms) {
  const auto x = parse_vec_literal(xs, "--x");
  const auto lam = parse_vec_literal(ls, "--lambda");
  const auto mu = parse_vec_literal(ms, "--mu");
  if (!x && !lam && !mu) return std::nullopt;
  PrimalDual s = p.start;
  s.x = require_dim(x, p.n, "--x", p.name, s.x);
  s.lam = require_dim(lam, p.l, "--lambda", p.name, s.lam);
  s.mu = require_dim(mu, p.m, "--mu", p.name, s.mu);
  return s;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"exact augmented Lagrangian toolkit", "exal"};
  app.require_subcommand(1);
  app.footer("Run `exal list-problems` for the available problem names.");
  std::string config_path;  // documentation sink; the file is applied below

  // ---- solve ------------------------------------------------------------
  auto* solve =
      app.add_subcommand("solve", "minimize the augmented Lagrangian on one "
                                  "problem (adaptive penalty, or fixed --c)");
  SolverFlags solve_f;
  std::string solve_problem, solve_out;
  std::string solve_x = "default", solve_lam = "default", solve_mu = "default";
  double solve_c = 1.0;
  solve->add_option("--problem", solve_problem, "registry problem name")
      ->required();
  add_solver_flags(solve, solve_f);
  auto* solve_c_opt = solve->add_option(
      "--c", solve_c, "minimize at this fixed penalty value (no adaptation)");
  solve->add_option("--x", solve_x,
                    "start point, e.g. 0.5,0.5 (default: the problem's)");
  solve->add_option("--lambda", solve_lam,
                    "start multipliers for the equality block");
  solve->add_option("--mu", solve_mu,
                    "start multipliers for the inequality block");
  solve->add_option("--out", solve_out,
                    "write the JSON report here instead of stdout");
  solve->add_option("--config", config_path,
                    "file of key = value lines; explicit flags win");

  // ---- sweep ------------------------------------------------------------
  auto* sweep = app.add_subcommand(
      "sweep", "fixed-c solves over a penalty grid and several starts, "
               "tabulating recovery of the certified solution");
  SolverFlags sweep_f;
  std::string sweep_problem, sweep_out, sweep_clist, sweep_format = "csv";
  double sweep_c = 1.0;
  int sweep_starts = 2;
  sweep->add_option("--problem", sweep_problem, "registry problem name")
      ->required();
  add_solver_flags(sweep, sweep_f);
  auto* sweep_c_opt =
      sweep->add_option("--c", sweep_c, "sweep this single penalty value");
  auto* sweep_clist_opt = sweep->add_option(
      "--c-list", sweep_clist,
      "comma-separated penalty grid, e.g. 0.01,0.1,1,10,100");
  sweep_c_opt->excludes(sweep_clist_opt);
  sweep->add_option("--starts", sweep_starts,
                    "number of starts (the problem's own plus sampled ones)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sweep->add_option("--format", sweep_format, "report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sweep->add_option("--out", sweep_out,
                    "write the report here instead of stdout");
  sweep->add_option("--config", config_path,
                    "file of key = value lines; explicit flags win");

  // ---- check-grad -------------------------------------------------------
  auto* check = app.add_subcommand(
      "check-grad",
      "audit analytic gradients against central finite differences");
  std::string check_problem, check_out;
  std::string check_phi = "linear", check_psi = "const:1";
  double check_c = 1.0, check_rtol = 1e-5;
  int check_samples = 100;
  std::uint64_t check_seed = 0;
  check->add_option("--problem", check_problem, "registry problem name")
      ->required();
  check->add_option("--phi", check_phi, "penalty shape")
      ->capture_default_str();
  check->add_option("--psi", check_psi, "inequality scaling shape")
      ->capture_default_str();
  check->add_option("--c", check_c, "penalty value used by the audit")
      ->capture_default_str();
  check->add_option("--samples", check_samples, "number of sampled points")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  check->add_option("--rtol", check_rtol, "per-coordinate mismatch tolerance")
      ->capture_default_str();
  check->add_option("--seed", check_seed, "sampling seed")
      ->capture_default_str();
  check->add_option("--out", check_out,
                    "write the JSON report here instead of stdout");
  check->add_option("--config", config_path,
                    "file of key = value lines; explicit flags win");

  // ---- regularity ---------------------------------------------------------
  auto* reg = app.add_subcommand(
      "regularity", "constraint-regularity report (Gram matrix, a_max, "
                    "active set, multiplier estimate) at a point");
  std::string reg_problem, reg_out, reg_x = "default";
  reg->add_option("--problem", reg_problem, "registry problem name")
      ->required();
  reg->add_option("--x", reg_x,
                  "evaluation point, e.g. 0.5,0.5 (default: the problem's "
                  "start)");
  reg->add_option("--out", reg_out,
                  "write the JSON report here instead of stdout");
  reg->add_option("--config", config_path,
                  "file of key = value lines; explicit flags win");

  // ---- verify -------------------------------------------------------------
  auto* verify = app.add_subcommand(
      "verify", "run the property-check suites; exits 1 on any violation");
  std::vector<std::string> verify_problems;
  std::string verify_suite = "all", verify_out;
  std::uint64_t verify_seed = 7;
  verify->add_option("--problem", verify_problems,
                     "restrict to these problems (repeatable; default: all)");
  verify->add_option("--suite", verify_suite,
                     "all | lemmas | regularity | solver | problems")
      ->capture_default_str();
  verify->add_option("--seed", verify_seed, "sampling seed")
      ->capture_default_str();
  verify->add_option("--out", verify_out,
                     "write the JSON report here instead of stdout");
  verify->add_option("--config", config_path,
                     "file of key = value lines; explicit flags win");

  // ---- list-problems ------------------------------------------------------
  auto* list =
      app.add_subcommand("list-problems", "print the registry problem names");

  // ---- parse --------------------------------------------------------------
  std::vector<std::string> eff_args;
  try {
    eff_args = apply_config_defaults(args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  std::vector<const char*> argv;
  argv.reserve(eff_args.size() + 1);
  argv.push_back("exal");
  for (const auto& a : eff_args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    CLI::App* target = &app;
    const auto parsed = app.get_subcommands();
    if (!parsed.empty()) target = parsed.front();
    out << target->help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& name : registry_names()) out << name << "\n";
      return 0;
    }

    if (solve->parsed()) {
      const Problem& p = registry_lookup(solve_problem);
      finish_solver_flags(solve_f);
      const auto start = build_start(p, solve_x, solve_lam, solve_mu);
      SolveReport rep;
      if (solve_c_opt->count() > 0)
        rep = minimize_fixed_c(p, solve_f.cfg, solve_c,
                               start.value_or(p.start));
      else
        rep = solve_adaptive(p, solve_f.cfg, start);
      return emit(serialize_solve(rep), solve_out, out, err);
    }

    if (sweep->parsed()) {
      const Problem& p = registry_lookup(sweep_problem);
      finish_solver_flags(sweep_f);
      std::vector<double> c_values;
      if (sweep_c_opt->count() > 0)
        c_values.push_back(sweep_c);
      else if (sweep_clist_opt->count() > 0)
        c_values = parse_number_list(sweep_clist, "--c-list");
      const SweepTable table =
          exactness_sweep(p, sweep_f.cfg, c_values, sweep_starts);
      const std::string payload = sweep_format == "json"
                                      ? serialize_sweep_json(table)
                                      : serialize_sweep_csv(table);
      return emit(payload, sweep_out, out, err);
    }

    if (check->parsed()) {
      const Problem& p = registry_lookup(check_problem);
      const AlfConfig acfg{check_c, parse_phi(check_phi),
                           parse_psi(check_psi)};
      const GradCheckReport rep =
          gradient_check(p, acfg, check_samples, check_rtol, check_seed);
      const int rc = emit(serialize_grad_check(p.name, rep), check_out, out,
                          err);
      if (rc != 0) return rc;
      return rep.violations > 0 ? 1 : 0;
    }

    if (reg->parsed()) {
      const Problem& p = registry_lookup(reg_problem);
      const auto x = parse_vec_literal(reg_x, "--x");
      const Vec at = require_dim(x, p.n, "--x", p.name, p.start.x);
      return emit(serialize_regularity(regularity_report(p, at)), reg_out,
                  out, err);
    }

    if (verify->parsed()) {
      VerifyConfig vcfg;
      vcfg.seed = verify_seed;
      const std::vector<CheckResult> results =
          run_verify_suite(verify_suite, verify_problems, vcfg);
      const int rc = emit(serialize_verify(results), verify_out, out, err);
      if (rc != 0) return rc;
      for (const auto& r : results)
        if (r.violations > 0) return 1;
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const UnknownProblem& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "exal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace exal::cli
