// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_REPORT_HPP
#define DOXA_REPORT_HPP

#include <cstdio>
#include <string>

#include <json.hpp>

#include "doxa/cache.hpp"
#include "doxa/compare.hpp"
#include "doxa/version.hpp"

namespace doxa {

using Json = nlohmann::ordered_json;

inline std::string hex_digest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline Json schedule_json(const SweepSchedule& s) {
  Json j;
  j["domain_sizes"] = s.domain_sizes;
  Json taus = Json::array();
  for (const auto& t : s.tolerances) taus.push_back(t.str());
  j["tolerances"] = taus;
  j["epsilon"] = s.epsilon;
  j["tau_stability"] = s.tau_stability;
  return j;
}

inline Json points_json(const std::vector<FinitePoint>& points) {
  Json arr = Json::array();
  for (const auto& p : points) {
    Json j;
    j["n"] = p.domain_size;
    j["tau"] = p.tau.str();
    if (p.failed) {
      j["error"] = to_string(p.fail_reason);
    } else {
      j["value"] = p.value;
      if (p.vacuous) j["vacuous"] = true;
    }
    j["engine"] = p.engine;
    arr.push_back(j);
  }
  return arr;
}

inline Json certificate_json(const KktCertificate& c) {
  Json j;
  j["constraint_residual"] = c.constraint_residual;
  j["sum_residual"] = c.sum_residual;
  j["stationarity_residual"] = c.stationarity_residual;
  j["complementarity_residual"] = c.complementarity_residual;
  j["multipliers"] = c.multipliers;
  j["iterations"] = c.iterations;
  return j;
}

inline Json method_result_json(const MethodResult& r) {
  Json j;
  j["method"] = r.method;
  if (r.defined()) {
    j["value"] = *r.value;
    j["defined"] = true;
  } else {
    j["defined"] = false;
    j["reason"] = to_string(r.reason);
  }
  if (r.vacuous) j["vacuous"] = true;
  if (r.atom_distribution) {
    Json dist = Json::array();
    for (int i = 0; i < r.atom_distribution->size(); ++i) dist.push_back((*r.atom_distribution)[i]);
    j["distribution"] = dist;
    if (!r.atom_distribution->labels().empty()) j["outcomes"] = r.atom_distribution->labels();
  }
  if (r.certificate) j["certificate"] = certificate_json(*r.certificate);
  if (!r.points.empty()) j["sweep"] = points_json(r.points);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

/// Full query report. Everything except the "timing" object is byte-stable
/// for identical inputs, flags and tool version.
inline Json query_report_json(const std::string& kb_text, const std::string& query_text,
                              const MethodResult& result, const SweepSchedule& schedule,
                              double wall_ms) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = kVersion;
  j["kb_digest"] = hex_digest(fnv1a(kb_text));
  j["query"] = query_text;
  j["result"] = method_result_json(result);
  j["schedule"] = schedule_json(schedule);
  j["timing"] = Json{{"wall_ms", wall_ms}};
  return j;
}

inline Json comparison_json(const std::string& kb_text, const std::string& query_text,
                            const MethodComparison& cmp, const SweepSchedule& schedule,
                            double wall_ms) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = kVersion;
  j["kb_digest"] = hex_digest(fnv1a(kb_text));
  j["query"] = query_text;
  Json methods = Json::array();
  for (const auto& m : cmp.methods) methods.push_back(method_result_json(m));
  j["methods"] = methods;
  Json checks = Json::array();
  for (const auto& c : cmp.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["lhs"] = c.lhs;
    cj["rhs"] = c.rhs;
    if (c.delta) cj["delta"] = *c.delta;
    cj["tolerance"] = c.tolerance;
    cj["status"] = c.status == TheoremCheck::Status::Pass
                       ? "pass"
                       : (c.status == TheoremCheck::Status::Fail ? "fail" : "vacuous");
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["all_pass"] = cmp.all_pass();
  j["tolerance"] = cmp.tolerance;
  j["schedule"] = schedule_json(schedule);
  j["timing"] = Json{{"wall_ms", wall_ms}};
  return j;
}

}  // namespace doxa

#endif  // DOXA_REPORT_HPP
