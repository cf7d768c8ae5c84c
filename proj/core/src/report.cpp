// Copyright (c) exal contributors.
// SPDX-License-Identifier: MIT

#include "exal/report.hpp"

#include <cmath>
#include <cstdio>

namespace exal {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_number(double v) {
  if (!std::isfinite(v)) return "\"" + format_double(v) + "\"";
  return format_double(v);
}

std::string json_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += "\"";
  return out;
}

std::string json_vec(const Vec& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += json_number(v[i]);
  }
  out += "]";
  return out;
}

std::string json_mat(const Mat& m) {
  std::string out = "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r) out += ", ";
    out += "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ", ";
      out += json_number(m(r, c));
    }
    out += "]";
  }
  out += "]";
  return out;
}

namespace {

std::string kkt_json(const KktResidual& k) {
  std::string out = "{";
  out += "\"stationarity\": " + json_number(k.stationarity);
  out += ", \"feasibility_eq\": " + json_number(k.feasibility_eq);
  out += ", \"feasibility_comp\": " + json_number(k.feasibility_comp);
  out += ", \"total\": " + json_number(k.total);
  out += "}";
  return out;
}

}  // namespace

std::string serialize_solve(const SolveReport& rep) {
  std::string out = "{\n";
  out += "  \"problem\": " + json_quote(rep.problem) + ",\n";
  out += "  \"c_final\": " + json_number(rep.c_final) + ",\n";
  out += "  \"iterations\": " + std::to_string(rep.iterations) + ",\n";
  out += "  \"x\": " + json_vec(rep.xi.x) + ",\n";
  out += "  \"lambda\": " + json_vec(rep.xi.lam) + ",\n";
  out += "  \"mu\": " + json_vec(rep.xi.mu) + ",\n";
  out += "  \"kkt\": " + kkt_json(rep.kkt) + ",\n";
  out += "  \"alf_value\": " + json_number(rep.alf_value) + ",\n";
  out += "  \"history\": [\n";
  for (std::size_t i = 0; i < rep.history.size(); ++i) {
    const HistoryEntry& h = rep.history[i];
    out += "    {\"outer\": " + std::to_string(h.outer);
    out += ", \"inner\": " + std::to_string(h.inner);
    out += ", \"c\": " + json_number(h.c);
    out += ", \"alf\": " + json_number(h.alf);
    out += ", \"grad_norm\": " + json_number(h.grad_norm);
    out += ", \"infeasibility\": " + json_number(h.infeasibility);
    out += i + 1 < rep.history.size() ? "},\n" : "}\n";
  }
  out += "  ],\n";
  out += "  \"termination\": " + json_quote(rep.termination) + "\n";
  out += "}\n";
  return out;
}

std::string serialize_sweep_csv(const SweepTable& table) {
  std::string out =
      "c,start_id,converged,alf_final,dist_to_kkt,infeasibility,a_max_final\n";
  for (const SweepRow& r : table.rows) {
    out += format_double(r.c);
    out += "," + std::to_string(r.start_id);
    out += r.converged ? ",1" : ",0";
    out += "," + format_double(r.alf_final);
    out += "," + format_double(r.dist_to_kkt);
    out += "," + format_double(r.infeasibility);
    out += "," + format_double(r.a_max_final);
    out += "\n";
  }
  return out;
}

std::string serialize_sweep_json(const SweepTable& table) {
  std::string out = "{\n";
  out += "  \"problem\": " + json_quote(table.problem) + ",\n";
  out += "  \"threshold_c\": ";
  out += table.threshold_c ? json_number(*table.threshold_c)
                           : std::string("null");
  out += ",\n  \"rows\": [\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const SweepRow& r = table.rows[i];
    out += "    {\"c\": " + json_number(r.c);
    out += ", \"start_id\": " + std::to_string(r.start_id);
    out += ", \"converged\": " + std::string(r.converged ? "true" : "false");
    out += ", \"alf_final\": " + json_number(r.alf_final);
    out += ", \"dist_to_kkt\": " + json_number(r.dist_to_kkt);
    out += ", \"infeasibility\": " + json_number(r.infeasibility);
    out += ", \"a_max_final\": " + json_number(r.a_max_final);
    out += i + 1 < table.rows.size() ? "},\n" : "}\n";
  }
  out += "  ]\n";
  out += "}\n";
  return out;
}

std::string serialize_grad_check(const std::string& problem,
                                 const GradCheckReport& rep) {
  std::string out = "{\n";
  out += "  \"problem\": " + json_quote(problem) + ",\n";
  out += "  \"samples\": " + std::to_string(rep.samples) + ",\n";
  out += "  \"violations\": " + std::to_string(rep.violations) + ",\n";
  out += "  \"worst\": " + json_number(rep.worst) + ",\n";
  out += "  \"worst_x\": " + json_number(rep.worst_x) + ",\n";
  out += "  \"worst_lambda\": " + json_number(rep.worst_lam) + ",\n";
  out += "  \"worst_mu\": " + json_number(rep.worst_mu) + ",\n";
  out += "  \"worst_case\": " + json_quote(rep.worst_case) + ",\n";
  out += "  \"rtol\": " + json_number(rep.rtol) + "\n";
  out += "}\n";
  return out;
}

std::string serialize_regularity(const RegularityReport& rep) {
  std::string out = "{\n";
  out += "  \"gram\": " + json_mat(rep.gram) + ",\n";
  out += "  \"a_max\": " + json_number(rep.a_max) + ",\n";
  out += "  \"positive_definite\": ";
  out += rep.positive_definite ? "true" : "false";
  out += ",\n";
  out += "  \"condition\": " + json_number(rep.condition) + ",\n";
  out += "  \"active_set\": [";
  for (std::size_t i = 0; i < rep.active_set.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(rep.active_set[i]);
  }
  out += "],\n";
  out += "  \"multiplier_estimate\": ";
  if (rep.multiplier_estimate) {
    out += "{\"lambda\": " + json_vec(rep.multiplier_estimate->first);
    out += ", \"mu\": " + json_vec(rep.multiplier_estimate->second) + "}";
  } else {
    out += "\"singular\"";
  }
  out += "\n}\n";
  return out;
}

std::string serialize_verify(const std::vector<CheckResult>& results) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const CheckResult& r = results[i];
    out += "  {\"check_name\": " + json_quote(r.name);
    out += ", \"samples\": " + std::to_string(r.samples);
    out += ", \"violations\": " + std::to_string(r.violations);
    out += ", \"worst_case\": " + json_quote(r.worst_case);
    out += i + 1 < results.size() ? "},\n" : "}\n";
  }
  out += "]\n";
  return out;
}

}  // namespace exal
