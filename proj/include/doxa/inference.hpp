// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_INFERENCE_HPP
#define DOXA_INFERENCE_HPP

#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "doxa/structured.hpp"

namespace doxa {

enum class Reason : std::uint8_t {
  None,
  NonConverged,
  BudgetExceeded,
  Infeasible,
  InfiniteCrossEntropy,
  NotSimpleKB,
  NotAboutConstant,
  NotWorldBased,
  VacuousConditioning,
  DegenerateCondition,
  Inapplicable,
};

inline const char* to_string(Reason r) {
  switch (r) {
    case Reason::None:
      return "none";
    case Reason::NonConverged:
      return "non-converged";
    case Reason::BudgetExceeded:
      return "budget-exceeded";
    case Reason::Infeasible:
      return "infeasible";
    case Reason::InfiniteCrossEntropy:
      return "infinite-cross-entropy";
    case Reason::NotSimpleKB:
      return "not-simple-kb";
    case Reason::NotAboutConstant:
      return "not-about-constant";
    case Reason::NotWorldBased:
      return "not-world-based";
    case Reason::VacuousConditioning:
      return "vacuous-conditioning";
    case Reason::DegenerateCondition:
      return "degenerate-condition";
    case Reason::Inapplicable:
      return "inapplicable";
  }
  return "?";
}

/// Approximation schedule for the double limit: for each tolerance, domain
/// sizes grow until successive values stabilize, then the two smallest
/// tolerances are compared. The widths here are configuration, not truth;
/// they were tuned so the bundled examples settle in minutes.
struct SweepSchedule {
  std::vector<int> domain_sizes{25, 50, 100, 200, 400, 800, 1600};
  std::vector<Rational> tolerances{Rational(1, 10), Rational(1, 20), Rational(1, 50)};
  double epsilon = 7e-3;         // Cauchy criterion between successive domain sizes
  double tau_stability = 0.05;   // allowed gap between the two smallest tolerances
  int stable_diffs = 1;          // consecutive gaps below epsilon needed to stop
  EngineOptions engine;

  static SweepSchedule quick() {
    SweepSchedule s;
    s.domain_sizes = {10, 20, 40, 80, 160};
    s.tolerances = {Rational(1, 10), Rational(1, 20)};
    s.epsilon = 2e-2;
    s.tau_stability = 0.1;
    return s;
  }
};

struct FinitePoint {
  int domain_size = 0;
  Rational tau;
  double value = 0.0;
  bool vacuous = false;
  bool failed = false;
  Reason fail_reason = Reason::None;
  double log_kb_weight = kNegInf;
  std::string engine;
};

/// A degree of belief that may not exist: defined only when the inner sweep
/// met the Cauchy criterion and the outer tolerances agree.
struct BeliefValue {
  std::optional<double> value;
  Reason reason = Reason::None;
  bool vacuous = false;
  std::vector<FinitePoint> points;

  bool defined() const { return value.has_value(); }
};

/// Conditional degree at one (N, tau): the weight fraction of KB-satisfying
/// classes that also satisfy the query. Zero KB weight yields 1, flagged
/// vacuous (usually a sign that the tolerance is too small for N).
inline FinitePoint degree_of_belief_at(const Formula& query, const KnowledgeBase& kb,
                                       int domain_size, const Rational& tau,
                                       const EngineOptions& opts = {}) {
  if (!kb.objective()) throw Error("degree_of_belief_at needs an objective knowledge base");
  if (!query.is_closed()) throw KindMismatch("query must be a closed formula");
  CountQuery q;
  q.vocabulary = kb.vocabulary;
  q.statistical = kb.statistical;
  q.tau = tau;
  q.tracked = {kb.facts_conjunction(), query};
  const BucketWeights w = weigh_buckets(q, domain_size, opts);

  FinitePoint p;
  p.domain_size = domain_size;
  p.tau = tau;
  p.engine = w.engine;
  const double log_kb = w.log_mass(0x1);
  const double log_both = w.log_mass(0x3);
  p.log_kb_weight = log_kb;
  if (log_kb == kNegInf) {
    p.value = 1.0;
    p.vacuous = true;
  } else {
    p.value = log_both == kNegInf ? 0.0 : std::exp(log_both - log_kb);
  }
  return p;
}

namespace detail {

struct Lane {
  std::optional<double> value;
  bool vacuous = false;
  Reason reason = Reason::NonConverged;
  std::vector<FinitePoint> points;
};

/// Inner sweep for one tolerance: grow N until two successive non-vacuous
/// values differ by less than epsilon. Vacuous or failed points are
/// resolution artifacts of a too-small domain; they never witness
/// convergence but do not abort the lane either. Exceeding the engine
/// budget ends the lane, since larger domains only cost more.
template <typename PointFn>
Lane run_lane(const SweepSchedule& s, const Rational& tau, PointFn&& eval) {
  Lane lane;
  std::optional<double> prev;
  bool any_value = false;
  bool budget_hit = false;
  int stable = 0;
  Reason last_fail = Reason::None;
  for (int n : s.domain_sizes) {
    FinitePoint p;
    try {
      p = eval(n, tau);
    } catch (const EnsembleTooLarge&) {
      budget_hit = true;
      break;
    }
    lane.points.push_back(p);
    if (p.failed) {
      last_fail = p.fail_reason;
      if (p.fail_reason == Reason::BudgetExceeded) {
        budget_hit = true;
        break;
      }
      continue;
    }
    if (p.vacuous) continue;
    any_value = true;
    if (prev && std::abs(p.value - *prev) < s.epsilon) {
      if (++stable >= std::max(1, s.stable_diffs)) {
        lane.value = p.value;
        lane.reason = Reason::None;
        return lane;
      }
    } else if (prev) {
      stable = 0;
    }
    prev = p.value;
  }
  if (!any_value && last_fail == Reason::None && !budget_hit && !lane.points.empty()) {
    // every point was vacuous: the conditioning convention value
    lane.value = 1.0;
    lane.vacuous = true;
    lane.reason = Reason::None;
    return lane;
  }
  if (budget_hit)
    lane.reason = Reason::BudgetExceeded;
  else if (last_fail != Reason::None)
    lane.reason = last_fail;
  else
    lane.reason = Reason::NonConverged;
  return lane;
}

/// Full double-limit approximation: per-tolerance lanes run concurrently,
/// then the two smallest tolerances must agree within tau_stability. The
/// reported value is the smallest tolerance's.
template <typename PointFn>
BeliefValue sweep_limit(const SweepSchedule& s, PointFn&& eval) {
  BeliefValue out;
  if (s.tolerances.empty() || s.domain_sizes.empty()) {
    out.reason = Reason::NonConverged;
    return out;
  }
  std::vector<std::future<Lane>> futures;
  futures.reserve(s.tolerances.size());
  for (const Rational& tau : s.tolerances)
    futures.push_back(
        std::async(std::launch::async, [&s, tau, &eval] { return run_lane(s, tau, eval); }));
  std::vector<Lane> lanes;
  lanes.reserve(futures.size());
  for (auto& f : futures) lanes.push_back(f.get());

  for (const auto& lane : lanes)
    for (const auto& p : lane.points) out.points.push_back(p);

  const Lane& last = lanes.back();
  if (!last.value) {
    out.reason = last.reason;
    return out;
  }
  if (lanes.size() >= 2) {
    const Lane& prev = lanes[lanes.size() - 2];
    if (!prev.value) {
      out.reason = prev.reason;
      return out;
    }
    if (std::abs(*prev.value - *last.value) > s.tau_stability) {
      out.reason = Reason::NonConverged;
      return out;
    }
  }
  out.value = last.value;
  out.vacuous = last.vacuous;
  out.reason = Reason::None;
  return out;
}

}  // namespace detail

/// Degree of belief in the double limit (domain size, then tolerance),
/// approximated by the schedule. UNDEFINED results carry diagnostics rather
/// than an extrapolated guess.
inline BeliefValue degree_of_belief_limit(const Formula& query, const KnowledgeBase& kb,
                                          const SweepSchedule& schedule = {}) {
  return detail::sweep_limit(schedule, [&](int n, const Rational& tau) {
    return degree_of_belief_at(query, kb, n, tau, schedule.engine);
  });
}

}  // namespace doxa

#endif  // DOXA_INFERENCE_HPP
