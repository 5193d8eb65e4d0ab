// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_METHODS_HPP
#define DOXA_METHODS_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "doxa/inference.hpp"
#include "doxa/parse.hpp"
#include "doxa/solver.hpp"

namespace doxa {

struct EvalResult {
  std::optional<double> value;
  Reason reason = Reason::None;
  bool vacuous = false;

  bool defined() const { return value.has_value(); }
};

/// A degree-of-belief generator: maps (closed query, objective knowledge
/// base) to a value. World-based processes expose the (N, tau) pair that
/// reconstructs their world prior; evaluate then agrees with conditioning
/// that prior, which is what cew relies on.
struct InferenceProcess {
  struct WorldBasis {
    int domain_size = 0;
    Rational tau;
    EngineOptions engine;
  };

  std::string name;
  std::function<EvalResult(const Formula&, const KnowledgeBase&)> evaluate;
  std::optional<WorldBasis> world_basis;
};

struct MethodResult {
  std::string method;
  std::optional<double> value;
  Reason reason = Reason::None;
  bool vacuous = false;
  std::optional<FiniteDistribution> atom_distribution;
  std::optional<KktCertificate> certificate;
  std::vector<FinitePoint> points;
  std::string note;

  bool defined() const { return value.has_value(); }
};

inline Reason map_status(SolveStatus s) {
  switch (s) {
    case SolveStatus::Ok:
      return Reason::None;
    case SolveStatus::Infeasible:
      return Reason::Infeasible;
    case SolveStatus::InfiniteCrossEntropy:
      return Reason::InfiniteCrossEntropy;
    case SolveStatus::NonConverged:
      return Reason::NonConverged;
  }
  return Reason::NonConverged;
}

// ---------------------------------------------------------------------------
// The maximum-entropy inference process.

namespace detail {

struct MeSetup {
  int constant = -1;           // the designated constant, -1 when none is needed
  Formula fact_part;           // closed fact conjunction
  Reason reason = Reason::None;
};

inline MeSetup me_setup(const Formula& query, const KnowledgeBase& kb) {
  MeSetup s;
  s.fact_part = kb.facts_conjunction();
  if (!kb.objective()) {
    s.reason = Reason::NotSimpleKB;
    return s;
  }
  const auto fact_constants = detail::single_constant(kb.facts);
  std::optional<int> query_constant;
  {
    std::vector<Formula> qs{query};
    query_constant = detail::single_constant(qs);
    std::vector<int> all = query.constants();
    for (int c : all)
      if (query_constant && c != *query_constant) {
        s.reason = Reason::NotSimpleKB;
        return s;
      }
  }
  // Facts, when present, must be about one constant that matches the query's.
  for (const auto& f : kb.facts)
    if (f.constants().empty() && !f.is_true_literal()) {
      s.reason = Reason::NotSimpleKB;
      return s;
    }
  if (fact_constants && query_constant && *fact_constants != *query_constant) {
    s.reason = Reason::NotSimpleKB;
    return s;
  }
  if (fact_constants)
    s.constant = *fact_constants;
  else if (query_constant)
    s.constant = *query_constant;
  return s;
}

}  // namespace detail

/// Rows for the statistical constraints over the 2^k predicate atoms, with
/// the tolerance taken to zero: ~= becomes an equality, <~ a plain <=.
inline LinearConstraintSet me_constraint_rows(const KnowledgeBase& kb) {
  const int k = kb.vocabulary.predicate_count();
  const int atoms = 1 << k;
  LinearConstraintSet rows;
  rows.dimension = atoms;
  for (const auto& pc : kb.statistical) {
    LinearRow row;
    row.coeffs.assign(static_cast<std::size_t>(atoms), 0.0);
    row.rel = pc.cmp == ProportionConstraint::Cmp::ApproxEq ? LinearRow::Rel::Eq
                                                            : LinearRow::Rel::Le;
    const double alpha = pc.bound.to_double();
    const std::uint64_t den = pc.denominator.atom_mask(k);
    const std::uint64_t num = pc.numerator.atom_mask(k) & den;
    if (pc.denominator.is_true_literal()) {
      for (int a = 0; a < atoms; ++a)
        if ((num >> a) & 1) row.coeffs[static_cast<std::size_t>(a)] = 1.0;
      row.bound = alpha;
    } else {
      for (int a = 0; a < atoms; ++a) {
        double c = 0.0;
        if ((den >> a) & 1) c -= alpha;
        if ((num >> a) & 1) c += 1.0;
        row.coeffs[static_cast<std::size_t>(a)] = c;
      }
      row.bound = 0.0;
    }
    rows.rows.push_back(std::move(row));
  }
  return rows;
}

/// The ME inference process: the entropy-maximizing distribution over the
/// predicate atoms subject to the statistical constraints, with the
/// designated constant treated as a random domain element. Requires a simple
/// knowledge base (approximate statistical constraints plus closed facts
/// about at most one constant, matching the query's constant).
inline MethodResult me_process(const Formula& query, const KnowledgeBase& kb,
                               const SolverOptions& sopts = {}) {
  MethodResult out;
  out.method = "me";
  const auto setup = detail::me_setup(query, kb);
  if (setup.reason != Reason::None) {
    out.reason = setup.reason;
    return out;
  }
  const int k = kb.vocabulary.predicate_count();
  const Projection proj = maximize_entropy(1 << k, me_constraint_rows(kb), sopts);
  out.certificate = proj.certificate;
  if (proj.status != SolveStatus::Ok) {
    out.reason = map_status(proj.status);
    return out;
  }
  out.atom_distribution = proj.distribution;

  const Formula cond_open =
      setup.constant >= 0 ? setup.fact_part.substitute_constant(setup.constant) : setup.fact_part;
  const Formula query_open =
      setup.constant >= 0 ? query.substitute_constant(setup.constant) : query;
  const std::uint64_t cond_mask = cond_open.atom_mask(k);
  const std::uint64_t both_mask = query_open.atom_mask(k) & cond_mask;
  double below = 0.0, above = 0.0;
  for (int a = 0; a < (1 << k); ++a) {
    if ((cond_mask >> a) & 1) {
      below += proj.distribution[a];
      if ((both_mask >> a) & 1) above += proj.distribution[a];
    }
  }
  if (below <= 1e-12) {
    // Conditioning on a zero-mass fact part: the degree is 1 by convention
    // but the maximum-entropy reading breaks down here, so flag it.
    out.value = 1.0;
    out.vacuous = true;
    out.reason = Reason::DegenerateCondition;
    return out;
  }
  out.value = above / below;
  return out;
}

/// Independent closed-form check for limit degrees on simple knowledge
/// bases; delegates to the ME process.
inline double me_limit_crosscheck(const Formula& query, const KnowledgeBase& kb) {
  MethodResult r = me_process(query, kb);
  if (!r.defined() || r.reason == Reason::DegenerateCondition) {
    if (r.reason == Reason::DegenerateCondition) return 1.0;
    throw Error(std::string("me_limit_crosscheck: ") + to_string(r.reason));
  }
  return *r.value;
}

// ---------------------------------------------------------------------------
// Inference-process constructors.

/// The finite random-worlds process at one (N, tau): condition the uniform
/// distribution over all worlds of that domain size.
inline InferenceProcess finite_rw_process(int domain_size, const Rational& tau,
                                          const EngineOptions& engine = {}) {
  InferenceProcess p;
  p.name = "rw[N=" + std::to_string(domain_size) + ",tau=" + tau.str() + "]";
  p.world_basis = InferenceProcess::WorldBasis{domain_size, tau, engine};
  p.evaluate = [domain_size, tau, engine](const Formula& q, const KnowledgeBase& kb) {
    EvalResult r;
    try {
      const FinitePoint pt = degree_of_belief_at(q, kb, domain_size, tau, engine);
      r.value = pt.value;
      r.vacuous = pt.vacuous;
      if (pt.vacuous) r.reason = Reason::VacuousConditioning;
    } catch (const EnsembleTooLarge&) {
      r.reason = Reason::BudgetExceeded;
    }
    return r;
  };
  return p;
}

/// The limit random-worlds process. On simple knowledge bases with a
/// non-degenerate fact part the value is taken from the maximum-entropy
/// closed form, which is exact in the limit; everything else runs the sweep.
/// Exact zeros from the closed form are what make downstream cross-entropy
/// degeneracies (rather than epsilon-sized masses) detectable.
inline InferenceProcess rw_limit_process(const SweepSchedule& schedule = {}) {
  InferenceProcess p;
  p.name = "rw-limit";
  p.evaluate = [schedule](const Formula& q, const KnowledgeBase& kb) {
    EvalResult r;
    MethodResult me = me_process(q, kb);
    if (me.defined() && me.reason == Reason::None) {
      r.value = me.value;
      return r;
    }
    BeliefValue bv = degree_of_belief_limit(q, kb, schedule);
    r.value = bv.value;
    r.vacuous = bv.vacuous;
    r.reason = bv.reason;
    return r;
  };
  return p;
}

/// The ME process wrapped as an inference process (no world structure).
inline InferenceProcess me_inference_process() {
  InferenceProcess p;
  p.name = "me";
  p.evaluate = [](const Formula& q, const KnowledgeBase& kb) {
    EvalResult r;
    MethodResult me = me_process(q, kb);
    r.value = me.value;
    r.vacuous = me.vacuous;
    r.reason = me.reason;
    return r;
  };
  return p;
}

// ---------------------------------------------------------------------------
// CEW: cross-entropy reweighting of the world prior.

/// Projects the process's world prior onto {objective part has probability
/// one} and the belief rows, then reads off the query mass. The projection
/// runs over weight buckets (classes sharing all tracked formula truths):
/// the Gibbs form of the optimum is constant on each bucket, so the
/// collapsed solve is exactly the class-space solve.
inline MethodResult cew(const InferenceProcess& process, const Formula& query,
                        const KnowledgeBase& kb, const SolverOptions& sopts = {}) {
  MethodResult out;
  out.method = "cew";
  if (!process.world_basis) {
    out.reason = Reason::NotWorldBased;
    return out;
  }
  if (kb.beliefs.size() > 8) throw Error("cew supports at most 8 belief constraints");
  const auto& basis = *process.world_basis;

  CountQuery q;
  q.vocabulary = kb.vocabulary;
  q.statistical = kb.statistical;
  q.tau = basis.tau;
  q.tracked.push_back(kb.facts_conjunction());
  std::vector<std::pair<int, int>> belief_bits;  // (event bit, condition bit or -1)
  for (const auto& b : kb.beliefs) {
    const int ev = static_cast<int>(q.tracked.size());
    q.tracked.push_back(b.event);
    int cd = -1;
    if (!b.condition.is_true_literal()) {
      cd = static_cast<int>(q.tracked.size());
      q.tracked.push_back(b.condition);
    }
    belief_bits.emplace_back(ev, cd);
  }
  const int query_bit = static_cast<int>(q.tracked.size());
  q.tracked.push_back(query);

  BucketWeights w;
  try {
    w = weigh_buckets(q, basis.domain_size, basis.engine);
  } catch (const EnsembleTooLarge&) {
    out.reason = Reason::BudgetExceeded;
    return out;
  }

  std::vector<std::uint32_t> support;
  double max_lw = kNegInf;
  for (std::size_t b = 0; b < w.log_weight.size(); ++b)
    if ((b & 1u) && w.log_weight[b] != kNegInf) {
      support.push_back(static_cast<std::uint32_t>(b));
      max_lw = std::max(max_lw, w.log_weight[b]);
    }
  if (support.empty()) {
    out.reason = Reason::VacuousConditioning;
    out.vacuous = true;
    return out;
  }

  std::vector<double> weights(support.size());
  for (std::size_t i = 0; i < support.size(); ++i)
    weights[i] = std::exp(w.log_weight[support[i]] - max_lw);
  const FiniteDistribution prior = FiniteDistribution::normalized(std::move(weights));

  LinearConstraintSet rows;
  rows.dimension = static_cast<int>(support.size());
  for (std::size_t j = 0; j < kb.beliefs.size(); ++j) {
    const auto& b = kb.beliefs[j];
    const auto [ev, cd] = belief_bits[j];
    LinearRow row;
    row.coeffs.assign(support.size(), 0.0);
    row.rel = b.cmp == BeliefConstraint::Cmp::Eq ? LinearRow::Rel::Eq : LinearRow::Rel::Le;
    const double alpha = b.bound.to_double();
    for (std::size_t i = 0; i < support.size(); ++i) {
      const std::uint32_t bits = support[i];
      const bool e = (bits >> ev) & 1;
      if (cd < 0) {
        if (e) row.coeffs[i] = 1.0;
      } else {
        const bool c = (bits >> cd) & 1;
        if (c) row.coeffs[i] = (e ? 1.0 : 0.0) - alpha;
      }
    }
    row.bound = cd < 0 ? alpha : 0.0;
    rows.rows.push_back(std::move(row));
  }

  const Projection proj = minimize_cross_entropy(prior, rows, sopts);
  out.certificate = proj.certificate;
  if (proj.status != SolveStatus::Ok) {
    out.reason = map_status(proj.status);
    return out;
  }
  double value = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i)
    if ((support[i] >> query_bit) & 1) value += proj.distribution[static_cast<int>(i)];
  out.value = value;
  out.atom_distribution = proj.distribution;
  return out;
}

// ---------------------------------------------------------------------------
// CEF: cross-entropy projection over formula atoms.

namespace detail {

inline std::vector<Formula> belief_generators(const std::vector<BeliefConstraint>& beliefs) {
  std::vector<Formula> gens;
  auto add = [&gens](const Formula& f) {
    if (f.is_true_literal()) return;
    for (const auto& g : gens)
      if (g.equals(f)) return;
    gens.push_back(f);
  };
  for (const auto& b : beliefs) {
    add(b.event);
    add(b.condition);
  }
  return gens;
}

}  // namespace detail

/// Builds the process's distribution over the atoms of the belief-base
/// formulas, projects it onto the compiled belief rows, and mixes the
/// process's answers conditioned on each atom. Terms whose projected mass
/// is zero are skipped without evaluating the process there (the conjoined
/// knowledge base may be inconsistent).
inline MethodResult cef(const InferenceProcess& process, const Formula& query,
                        const KnowledgeBase& kb, const SolverOptions& sopts = {}) {
  MethodResult out;
  out.method = "cef";
  const KnowledgeBase objective = kb.objective_part();

  if (kb.beliefs.empty()) {
    const EvalResult base = process.evaluate(query, objective);
    out.value = base.value;
    out.vacuous = base.vacuous;
    out.reason = base.reason;
    return out;
  }

  const AtomSet atoms = atoms_over(detail::belief_generators(kb.beliefs));
  std::vector<double> mu(static_cast<std::size_t>(atoms.atom_count()), 0.0);
  std::vector<std::string> labels(static_cast<std::size_t>(atoms.atom_count()));
  for (int j = 0; j < atoms.atom_count(); ++j) {
    const EvalResult r = process.evaluate(atoms.atom_formula(j), objective);
    if (!r.defined() || r.vacuous) {
      out.reason = r.vacuous ? Reason::VacuousConditioning : r.reason;
      out.vacuous = r.vacuous;
      return out;
    }
    mu[static_cast<std::size_t>(j)] = std::max(0.0, *r.value);
    labels[static_cast<std::size_t>(j)] = atoms.atom_formula(j).str(kb.vocabulary);
  }

  FiniteDistribution prior;
  try {
    prior = FiniteDistribution::normalized(std::move(mu), std::move(labels));
  } catch (const Error&) {
    out.reason = Reason::VacuousConditioning;
    return out;
  }

  const Projection proj = minimize_cross_entropy(prior, compile_belief_base(kb.beliefs, atoms), sopts);
  out.certificate = proj.certificate;
  if (proj.status != SolveStatus::Ok) {
    out.reason = map_status(proj.status);
    return out;
  }
  out.atom_distribution = proj.distribution;

  double value = 0.0;
  for (int j = 0; j < atoms.atom_count(); ++j) {
    const double w = proj.distribution[j];
    if (w <= 1e-14) continue;
    const KnowledgeBase conditioned = objective.with_facts({atoms.atom_formula(j)});
    const EvalResult term = process.evaluate(query, conditioned);
    if (!term.defined()) {
      out.reason = term.reason;
      out.value.reset();
      return out;
    }
    value += w * *term.value;
  }
  out.value = value;
  return out;
}

// ---------------------------------------------------------------------------
// RS: the representative-set transform.

/// Replaces the belief base about a constant by statistics over a fresh
/// small class containing it, then hands the purely objective result to the
/// process.
inline MethodResult rs(const InferenceProcess& process, const Formula& query,
                       const KnowledgeBase& kb, const std::string& fresh_predicate = "S") {
  MethodResult out;
  out.method = "rs";
  std::optional<int> c = belief_base_constant(kb);
  if (!c && kb.beliefs.empty()) {
    std::vector<Formula> qs{query};
    c = detail::single_constant(qs);
  }
  if (!c) {
    out.reason = Reason::NotAboutConstant;
    return out;
  }
  KnowledgeBase rewritten;
  try {
    const KnowledgeBase frag =
        representative_set_rewrite(kb.beliefs, kb.vocabulary, *c, fresh_predicate);
    rewritten.vocabulary = frag.vocabulary;
    rewritten.statistical = kb.statistical;
    for (const auto& pc : frag.statistical) rewritten.statistical.push_back(pc);
    rewritten.facts = kb.facts;
    for (const auto& f : frag.facts) rewritten.facts.push_back(f);
  } catch (const NotAboutConstant&) {
    out.reason = Reason::NotAboutConstant;
    return out;
  }
  out.note = render(rewritten);
  const EvalResult r = process.evaluate(query, rewritten);
  out.value = r.value;
  out.vacuous = r.vacuous;
  out.reason = r.reason;
  return out;
}

// ---------------------------------------------------------------------------
// Limits of the extension methods over the finite random-worlds processes.

inline MethodResult cew_limit(const Formula& query, const KnowledgeBase& kb,
                              const SweepSchedule& schedule = {}) {
  MethodResult out;
  out.method = "cew";
  Reason last_fail = Reason::None;
  BeliefValue bv = detail::sweep_limit(schedule, [&](int n, const Rational& tau) {
    const MethodResult r = cew(finite_rw_process(n, tau, schedule.engine), query, kb);
    FinitePoint p;
    p.domain_size = n;
    p.tau = tau;
    if (r.defined()) {
      p.value = *r.value;
    } else if (r.reason == Reason::VacuousConditioning) {
      p.value = 1.0;
      p.vacuous = true;
    } else {
      p.failed = true;
      p.fail_reason = r.reason;
      last_fail = r.reason;
    }
    return p;
  });
  out.value = bv.value;
  out.reason = bv.reason;
  out.vacuous = bv.vacuous;
  out.points = std::move(bv.points);
  return out;
}

inline MethodResult cef_limit(const Formula& query, const KnowledgeBase& kb,
                              const SweepSchedule& schedule = {}) {
  MethodResult out;
  out.method = "cef";
  BeliefValue bv = detail::sweep_limit(schedule, [&](int n, const Rational& tau) {
    const MethodResult r = cef(finite_rw_process(n, tau, schedule.engine), query, kb);
    FinitePoint p;
    p.domain_size = n;
    p.tau = tau;
    if (r.defined()) {
      p.value = *r.value;
    } else if (r.reason == Reason::VacuousConditioning) {
      p.value = 1.0;
      p.vacuous = true;
    } else {
      p.failed = true;
      p.fail_reason = r.reason;
    }
    return p;
  });
  out.value = bv.value;
  out.reason = bv.reason;
  out.vacuous = bv.vacuous;
  out.points = std::move(bv.points);
  return out;
}

inline MethodResult rs_limit(const Formula& query, const KnowledgeBase& kb,
                             const SweepSchedule& schedule = {},
                             const std::string& fresh_predicate = "S") {
  MethodResult out;
  out.method = "rs";
  std::optional<int> c = belief_base_constant(kb);
  if (!c && kb.beliefs.empty()) {
    std::vector<Formula> qs{query};
    c = detail::single_constant(qs);
  }
  if (!c) {
    out.reason = Reason::NotAboutConstant;
    return out;
  }
  KnowledgeBase rewritten;
  try {
    const KnowledgeBase frag =
        representative_set_rewrite(kb.beliefs, kb.vocabulary, *c, fresh_predicate);
    rewritten.vocabulary = frag.vocabulary;
    rewritten.statistical = kb.statistical;
    for (const auto& pc : frag.statistical) rewritten.statistical.push_back(pc);
    rewritten.facts = kb.facts;
    for (const auto& f : frag.facts) rewritten.facts.push_back(f);
  } catch (const NotAboutConstant&) {
    out.reason = Reason::NotAboutConstant;
    return out;
  }
  out.note = render(rewritten);
  BeliefValue bv = degree_of_belief_limit(query, rewritten, schedule);
  out.value = bv.value;
  out.reason = bv.reason;
  out.vacuous = bv.vacuous;
  out.points = std::move(bv.points);
  return out;
}

// ---------------------------------------------------------------------------
// Sequential updating.

/// Applies belief constraints one at a time: after each step the projected
/// atom distribution becomes the prior for the next, with atoms refined over
/// the generators seen so far (new refinements weighted by the process's
/// conditionals). Sequential and concurrent updating coincide for
/// conditioning-style constraints but differ in general, and the order
/// matters; the per-step distributions land in the diagnostics.
inline MethodResult sequential_update(const InferenceProcess& process, const Formula& query,
                                      const KnowledgeBase& kb_objective,
                                      const std::vector<BeliefConstraint>& ordered_beliefs,
                                      const SolverOptions& sopts = {}) {
  MethodResult out;
  out.method = "sequential";
  std::vector<Formula> gens;
  std::vector<double> mu{1.0};

  auto atom_formula_of = [&](const std::vector<Formula>& gs, int index) {
    AtomSet a(gs);
    return a.atom_formula(index);
  };

  for (const auto& belief : ordered_beliefs) {
    std::vector<Formula> step_gens = gens;
    for (const Formula& f : detail::belief_generators({belief})) {
      bool present = false;
      for (const auto& g : step_gens)
        if (g.equals(f)) present = true;
      if (!present) step_gens.push_back(f);
    }
    const int old_n = static_cast<int>(gens.size());
    const int new_n = static_cast<int>(step_gens.size());
    std::vector<double> extended(static_cast<std::size_t>(1) << new_n, 0.0);
    for (int j = 0; j < (1 << new_n); ++j) {
      const int old_index = j & ((1 << old_n) - 1);
      const double base = mu[static_cast<std::size_t>(old_index)];
      if (base <= 0.0) continue;
      if (new_n == old_n) {
        extended[static_cast<std::size_t>(j)] = base;
        continue;
      }
      // Weight the refinement by the process's conditional on the old atom.
      Formula pattern = Formula::truth();
      for (int i = old_n; i < new_n; ++i) {
        Formula lit = ((j >> i) & 1) ? step_gens[static_cast<std::size_t>(i)]
                                     : Formula::negation(step_gens[static_cast<std::size_t>(i)]);
        pattern = pattern.is_true_literal() ? lit : Formula::conjunction(pattern, lit);
      }
      const KnowledgeBase conditioned =
          old_n == 0 ? kb_objective
                     : kb_objective.with_facts({atom_formula_of(gens, old_index)});
      const EvalResult r = process.evaluate(pattern, conditioned);
      if (!r.defined()) {
        out.reason = r.reason;
        return out;
      }
      extended[static_cast<std::size_t>(j)] = base * std::max(0.0, *r.value);
    }
    gens = step_gens;

    FiniteDistribution prior;
    try {
      prior = FiniteDistribution::normalized(std::move(extended));
    } catch (const Error&) {
      out.reason = Reason::VacuousConditioning;
      return out;
    }
    const AtomSet atoms(gens);
    const Projection proj =
        minimize_cross_entropy(prior, compile_belief_base({belief}, atoms), sopts);
    if (proj.status != SolveStatus::Ok) {
      out.reason = map_status(proj.status);
      out.certificate = proj.certificate;
      return out;
    }
    mu.assign(proj.distribution.probabilities().begin(), proj.distribution.probabilities().end());
    out.certificate = proj.certificate;
  }

  double value = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    if (mu[j] <= 1e-14) continue;
    const KnowledgeBase conditioned =
        gens.empty() ? kb_objective
                     : kb_objective.with_facts({AtomSet(gens).atom_formula(static_cast<int>(j))});
    const EvalResult term = process.evaluate(query, conditioned);
    if (!term.defined()) {
      out.reason = term.reason;
      return out;
    }
    value += mu[j] * *term.value;
  }
  out.value = value;
  out.atom_distribution = FiniteDistribution(mu);
  return out;
}

}  // namespace doxa

#endif  // DOXA_METHODS_HPP
