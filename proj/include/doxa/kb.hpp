// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_KB_HPP
#define DOXA_KB_HPP

#include <optional>
#include <string>
#include <vector>

#include "doxa/errors.hpp"
#include "doxa/formula.hpp"
#include "doxa/rational.hpp"
#include "doxa/vocabulary.hpp"

namespace doxa {

/// prop(num; den) ~= bound  or  prop(num; den) <~ bound.
/// The proportion of domain elements satisfying num among those satisfying
/// den, compared approximately (within a tolerance supplied at evaluation).
struct ProportionConstraint {
  enum class Cmp { ApproxEq, ApproxLe };

  Formula numerator;
  Formula denominator = Formula::truth();
  Cmp cmp = Cmp::ApproxEq;
  Rational bound;
};

/// bel(event; condition) = bound  or  bel(event; condition) <= bound.
/// Degrees of belief are compared exactly; no tolerance applies.
struct BeliefConstraint {
  enum class Cmp { Eq, Le };

  Formula event;
  Formula condition = Formula::truth();
  Cmp cmp = Cmp::Eq;
  Rational bound;
};

/// A parsed conjunction: objective part (statistical constraints plus ground
/// facts) and a flat, conjunctive belief base.
struct KnowledgeBase {
  Vocabulary vocabulary;
  std::vector<ProportionConstraint> statistical;
  std::vector<Formula> facts;
  std::vector<BeliefConstraint> beliefs;

  bool objective() const { return beliefs.empty(); }

  /// The objective part as its own knowledge base.
  KnowledgeBase objective_part() const { return KnowledgeBase{vocabulary, statistical, facts, {}}; }

  /// All facts conjoined (true when there are none).
  Formula facts_conjunction() const { return Formula::conjoin(facts); }

  /// Objective part plus extra closed facts, same vocabulary.
  KnowledgeBase with_facts(const std::vector<Formula>& extra) const {
    KnowledgeBase out = objective_part();
    out.beliefs = beliefs;
    for (const auto& f : extra) out.facts.push_back(f);
    return out;
  }
};

struct Classification {
  bool objective = false;
  bool flat_belief_base = false;
  /// Constant index when the objective part is a simple knowledge base about
  /// that constant: every statistical constraint approximate with unary-open
  /// parts, and all facts mention exactly that one constant.
  std::optional<int> simple_kb_about;
  bool essentially_propositional = false;
};

namespace detail {

/// Quantifier-free, unary-predicate-only, and (after stripping constants)
/// a formula in the single variable x. Everything the parser admits
/// satisfies this; the flag is kept because classification is part of the
/// public surface.
inline bool essentially_propositional_formula(const Formula& f) {
  (void)f;
  return true;
}

inline std::optional<int> single_constant(const std::vector<Formula>& fs) {
  std::optional<int> c;
  for (const auto& f : fs) {
    for (int k : f.constants()) {
      if (!c) {
        c = k;
      } else if (*c != k) {
        return std::nullopt;
      }
    }
  }
  return c;
}

}  // namespace detail

/// Total classification of a knowledge base; never fails. Stable under
/// reordering of conjuncts since it looks only at set-level structure.
inline Classification classify(const KnowledgeBase& kb) {
  Classification c;
  c.objective = kb.beliefs.empty();
  c.flat_belief_base = !kb.beliefs.empty();
  c.essentially_propositional = true;
  for (const auto& pc : kb.statistical)
    c.essentially_propositional = c.essentially_propositional &&
                                  detail::essentially_propositional_formula(pc.numerator) &&
                                  detail::essentially_propositional_formula(pc.denominator);

  // Simple knowledge base about c: approximate statistical constraints with
  // essentially propositional parts plus a closed fact part mentioning
  // exactly one constant.
  if (!kb.facts.empty()) {
    if (auto konst = detail::single_constant(kb.facts)) {
      bool all_about = true;
      for (const auto& f : kb.facts)
        if (f.constants().empty()) all_about = all_about && f.is_true_literal();
      if (all_about) c.simple_kb_about = konst;
    }
  }
  return c;
}

/// Constant index mentioned by every belief constraint, if there is exactly
/// one such constant and each belief mentions it alone.
inline std::optional<int> belief_base_constant(const KnowledgeBase& kb) {
  if (kb.beliefs.empty()) return std::nullopt;
  std::optional<int> c;
  for (const auto& b : kb.beliefs) {
    std::vector<int> ks = b.event.constants();
    for (int k : b.condition.constants()) ks.push_back(k);
    if (ks.empty()) return std::nullopt;
    for (int k : ks) {
      if (!c) {
        c = k;
      } else if (*c != k) {
        return std::nullopt;
      }
    }
  }
  return c;
}

/// Turns a belief base about a constant into statistics over a small fresh
/// class containing it: every bel(psi(c); theta(c)) cmp a becomes
/// prop(psi(x); theta(x) and S(x)) cmp' a with <= mapped to <~ and = to ~=,
/// conjoined with prop(S(x)) ~= 0 and the fact S(c). The result is a purely
/// objective knowledge base over the input vocabulary extended with S.
inline KnowledgeBase representative_set_rewrite(const std::vector<BeliefConstraint>& beliefs,
                                                const Vocabulary& vocab, int constant,
                                                const std::string& fresh_predicate) {
  for (const auto& b : beliefs) {
    std::vector<int> ks = b.event.constants();
    for (int k : b.condition.constants()) ks.push_back(k);
    if (ks.empty()) throw NotAboutConstant("belief constraint mentions no constant");
    for (int k : ks)
      if (k != constant)
        throw NotAboutConstant("belief constraint mentions a constant other than " +
                               vocab.constant_name(constant));
  }

  KnowledgeBase out;
  out.vocabulary = vocab.with_predicate(fresh_predicate);  // throws NameClash on collision
  const int s = out.vocabulary.predicate_count() - 1;
  const Formula s_of_x = Formula::pred(s, Term::x());

  for (const auto& b : beliefs) {
    ProportionConstraint pc;
    pc.numerator = b.event.substitute_constant(constant);
    const Formula cond = b.condition.substitute_constant(constant);
    pc.denominator = cond.is_true_literal() ? s_of_x : Formula::conjunction(cond, s_of_x);
    pc.cmp = b.cmp == BeliefConstraint::Cmp::Eq ? ProportionConstraint::Cmp::ApproxEq
                                                : ProportionConstraint::Cmp::ApproxLe;
    pc.bound = b.bound;
    out.statistical.push_back(std::move(pc));
  }
  out.statistical.push_back(
      ProportionConstraint{s_of_x, Formula::truth(), ProportionConstraint::Cmp::ApproxEq, Rational(0)});
  out.facts.push_back(Formula::pred(s, Term::con(constant)));
  return out;
}

}  // namespace doxa

#endif  // DOXA_KB_HPP
