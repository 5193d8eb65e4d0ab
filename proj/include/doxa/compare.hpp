// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_COMPARE_HPP
#define DOXA_COMPARE_HPP

#include <cmath>
#include <future>
#include <string>
#include <vector>

#include "doxa/methods.hpp"

namespace doxa {

struct TheoremCheck {
  enum class Status { Pass, Fail, Vacuous };

  std::string name;
  std::string lhs;
  std::string rhs;
  std::optional<double> delta;
  double tolerance = 0.0;
  Status status = Status::Vacuous;
};

struct MethodComparison {
  std::vector<MethodResult> methods;
  std::vector<TheoremCheck> checks;
  double tolerance = 0.0;

  bool all_pass() const {
    for (const auto& c : checks)
      if (c.status == TheoremCheck::Status::Fail) return false;
    return true;
  }

  const MethodResult* find(const std::string& method) const {
    for (const auto& m : methods)
      if (m.method == method) return &m;
    return nullptr;
  }
};

/// Runs every applicable method on the same query and tabulates the
/// equalities the theory promises: the extension methods agree with plain
/// conditioning on objective knowledge bases, the world and formula
/// projections agree with each other, the direct and limit orderings of the
/// formula projection agree when both exist, and the maximum-entropy and
/// representative-set routes agree on simple knowledge bases. Inapplicable
/// methods are data, not failures.
inline MethodComparison compare_methods(const Formula& query, const KnowledgeBase& kb,
                                        const SweepSchedule& schedule = {},
                                        double tolerance = 0.03) {
  MethodComparison cmp;
  cmp.tolerance = tolerance;
  const bool objective = kb.objective();

  auto rw_task = std::async(std::launch::async, [&]() {
    MethodResult r;
    r.method = "rw";
    if (!objective) {
      r.reason = Reason::Inapplicable;
      r.note = "conditioning needs an objective knowledge base";
      return r;
    }
    BeliefValue bv = degree_of_belief_limit(query, kb, schedule);
    r.value = bv.value;
    r.reason = bv.reason;
    r.vacuous = bv.vacuous;
    r.points = std::move(bv.points);
    return r;
  });
  auto cew_task =
      std::async(std::launch::async, [&]() { return cew_limit(query, kb, schedule); });
  auto cef_task =
      std::async(std::launch::async, [&]() { return cef_limit(query, kb, schedule); });
  auto cef_direct_task = std::async(std::launch::async, [&]() {
    MethodResult r = cef(rw_limit_process(schedule), query, kb);
    r.method = "cef-on-limit";
    return r;
  });
  auto rs_task = std::async(std::launch::async, [&]() {
    if (kb.beliefs.empty() || !belief_base_constant(kb)) {
      MethodResult r;
      r.method = "rs";
      r.reason = Reason::Inapplicable;
      r.note = "needs a belief base about a single constant";
      return r;
    }
    return rs_limit(query, kb, schedule);
  });
  auto me_task = std::async(std::launch::async, [&]() {
    if (objective) return me_process(query, kb);
    MethodResult r = cef(me_inference_process(), query, kb);
    r.method = "me";
    return r;
  });

  cmp.methods.push_back(rw_task.get());
  cmp.methods.push_back(cew_task.get());
  cmp.methods.push_back(cef_task.get());
  cmp.methods.push_back(cef_direct_task.get());
  cmp.methods.push_back(rs_task.get());
  cmp.methods.push_back(me_task.get());

  auto check = [&](const std::string& name, const std::string& a, const std::string& b) {
    TheoremCheck c;
    c.name = name;
    c.lhs = a;
    c.rhs = b;
    c.tolerance = tolerance;
    const MethodResult* ma = cmp.find(a);
    const MethodResult* mb = cmp.find(b);
    if (ma && mb && ma->defined() && mb->defined() && !ma->vacuous && !mb->vacuous) {
      c.delta = std::abs(*ma->value - *mb->value);
      c.status = *c.delta <= tolerance ? TheoremCheck::Status::Pass : TheoremCheck::Status::Fail;
    }
    cmp.checks.push_back(c);
  };

  if (objective) {
    check("cew-extends-conditioning", "cew", "rw");
    check("cef-extends-conditioning", "cef", "rw");
  }
  check("cew-matches-cef", "cew", "cef");
  check("cef-direct-matches-limit", "cef-on-limit", "cef");
  if (!objective) {
    check("me-route-matches-cef", "me", "cef");
    check("rs-route-matches-cef", "rs", "cef");
    check("rs-route-matches-me", "rs", "me");
  }
  return cmp;
}

}  // namespace doxa

#endif  // DOXA_COMPARE_HPP
