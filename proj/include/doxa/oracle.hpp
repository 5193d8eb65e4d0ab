// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_ORACLE_HPP
#define DOXA_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doxa/inference.hpp"

namespace doxa {

/// Exact class weight for small domains: multinomial(N; counts) times the
/// placement factors. Fits comfortably in 64 bits for the oracle ranges.
inline std::uint64_t exact_class_weight(const std::vector<int>& counts,
                                        const std::vector<int>& placement) {
  int n = 0;
  for (int c : counts) n += c;
  std::uint64_t w = 1;
  int filled = 0;
  for (int c : counts) {
    // running product of binomial coefficients: C(filled + c, c)
    for (int i = 1; i <= c; ++i) w = w * static_cast<std::uint64_t>(filled + i) / i;
    filled += c;
  }
  for (int a : placement) w *= static_cast<std::uint64_t>(counts[static_cast<std::size_t>(a)]);
  (void)n;
  return w;
}

struct OracleReport {
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool pass() const { return failures == 0 && cases > 0; }
};

namespace detail {

struct OracleProblem {
  KnowledgeBase kb;
  Formula query;
  Rational tau;
  std::string text;
};

/// Deterministic family of small conditioning problems for a vocabulary.
inline std::vector<OracleProblem> oracle_problems(const Vocabulary& vocab) {
  std::vector<OracleProblem> out;
  const int k = vocab.predicate_count();
  const int m = vocab.constant_count();
  auto base = [&] {
    KnowledgeBase kb;
    kb.vocabulary = vocab;
    return kb;
  };

  {
    OracleProblem p{base(), Formula::truth(), Rational(1, 4), "trivial"};
    out.push_back(p);
  }
  if (k >= 1) {
    const Formula p0x = Formula::pred(0, Term::x());
    {
      OracleProblem p{base(), Formula::truth(), Rational(1, 4), "half-window"};
      p.kb.statistical.push_back(
          {p0x, Formula::truth(), ProportionConstraint::Cmp::ApproxEq, Rational(1, 2)});
      out.push_back(p);
    }
    {
      OracleProblem p{base(), Formula::truth(), Rational(1, 10), "upper-window"};
      p.kb.statistical.push_back(
          {p0x, Formula::truth(), ProportionConstraint::Cmp::ApproxLe, Rational(1, 3)});
      out.push_back(p);
    }
    if (m >= 1) {
      const Formula p0c = Formula::pred(0, Term::con(0));
      {
        OracleProblem p{base(), p0c, Rational(1, 4), "query-constant"};
        out.push_back(p);
      }
      {
        OracleProblem p{base(), p0c, Rational(1, 3), "fact-and-window"};
        p.kb.statistical.push_back(
            {p0x, Formula::truth(), ProportionConstraint::Cmp::ApproxEq, Rational(2, 3)});
        p.kb.facts.push_back(p0c);
        p.query = p0c;
        out.push_back(p);
      }
    }
  }
  if (k >= 2) {
    const Formula p0x = Formula::pred(0, Term::x());
    const Formula p1x = Formula::pred(1, Term::x());
    {
      OracleProblem p{base(), Formula::truth(), Rational(1, 5), "conditional-window"};
      p.kb.statistical.push_back(
          {p1x, p0x, ProportionConstraint::Cmp::ApproxEq, Rational(3, 4)});
      out.push_back(p);
    }
    if (m >= 1) {
      OracleProblem p{base(), Formula::pred(1, Term::con(0)), Rational(1, 4), "mixed"};
      p.kb.statistical.push_back(
          {p1x, Formula::negation(p0x), ProportionConstraint::Cmp::ApproxLe, Rational(1, 2)});
      p.kb.facts.push_back(Formula::pred(0, Term::con(0)));
      out.push_back(p);
    }
    if (m >= 2) {
      OracleProblem p{base(),
                      Formula::conjunction(Formula::pred(0, Term::con(0)),
                                           Formula::pred(1, Term::con(1))),
                      Rational(1, 4), "two-constants"};
      p.kb.facts.push_back(
          Formula::disjunction(Formula::pred(0, Term::con(1)), Formula::pred(1, Term::con(0))));
      out.push_back(p);
    }
  }
  if (k >= 3) {
    const Formula p2x = Formula::pred(2, Term::x());
    const Formula p0x = Formula::pred(0, Term::x());
    OracleProblem p{base(), Formula::truth(), Rational(1, 4), "three-predicates"};
    p.kb.statistical.push_back(
        {Formula::conjunction(p2x, p0x), Formula::truth(), ProportionConstraint::Cmp::ApproxLe,
         Rational(2, 5)});
    if (m >= 1) p.query = Formula::pred(2, Term::con(0));
    out.push_back(p);
  }
  return out;
}

struct ExactConditional {
  std::uint64_t above = 0;
  std::uint64_t below = 0;
};

inline ExactConditional brute_force_conditional(const OracleProblem& p, int domain_size) {
  ExactConditional r;
  const auto worlds = brute_force_worlds(p.kb.vocabulary, domain_size);
  const int k = p.kb.vocabulary.predicate_count();
  const Formula facts = p.kb.facts_conjunction();
  for (const auto& w : worlds) {
    bool sat = world_satisfies(facts, w);
    for (const auto& pc : p.kb.statistical)
      sat = sat && world_satisfies(pc, w, k, p.tau);
    if (!sat) continue;
    ++r.below;
    if (world_satisfies(p.query, w)) ++r.above;
  }
  return r;
}

inline ExactConditional class_conditional(const OracleProblem& p, int domain_size) {
  ExactConditional r;
  const auto ens = enumerate_classes(p.kb.vocabulary, domain_size);
  const Formula facts = p.kb.facts_conjunction();
  for (const auto& cls : ens.classes) {
    if (cls.log_weight == kNegInf) continue;
    bool sat = eval_objective(facts, cls);
    for (const auto& pc : p.kb.statistical)
      sat = sat && eval_objective(pc, cls, p.kb.vocabulary, p.tau);
    if (!sat) continue;
    const std::uint64_t w = exact_class_weight(cls.counts, cls.placement);
    r.below += w;
    if (eval_objective(p.query, cls)) r.above += w;
  }
  return r;
}

}  // namespace detail

/// Exhaustively compares class-based conditional probabilities against
/// explicit-world enumeration: exact equality on the integer path, 1e-12 on
/// the floating path (both engine backends). Throws OracleTooLarge when the
/// requested caps blow the explicit-world budget.
inline OracleReport run_world_oracle(int max_n, int max_preds, int max_consts,
                                     double world_budget = 1e7) {
  {
    const double worst = max_n * std::log(std::pow(2.0, max_preds)) +
                         max_consts * std::log(static_cast<double>(std::max(max_n, 1)));
    if (worst > std::log(world_budget))
      throw OracleTooLarge("oracle caps exceed the explicit-world budget");
  }
  OracleReport rep;
  for (int k = 0; k <= max_preds; ++k) {
    for (int m = 0; m <= max_consts; ++m) {
      std::vector<std::string> preds, consts;
      for (int i = 0; i < k; ++i) preds.push_back("P" + std::to_string(i));
      for (int i = 0; i < m; ++i) consts.push_back("c" + std::to_string(i));
      const Vocabulary vocab(preds, consts);
      for (int n = 1; n <= max_n; ++n) {
        for (const auto& p : detail::oracle_problems(vocab)) {
          ++rep.cases;
          const auto brute = detail::brute_force_conditional(p, n);
          const auto cls_path = detail::class_conditional(p, n);
          auto fail = [&](const std::string& why) {
            ++rep.failures;
            if (rep.first_failure.empty())
              rep.first_failure = "k=" + std::to_string(k) + " m=" + std::to_string(m) +
                                  " N=" + std::to_string(n) + " case=" + p.text + ": " + why;
          };
          if (brute.above != cls_path.above || brute.below != cls_path.below) {
            fail("exact weights differ: brute " + std::to_string(brute.above) + "/" +
                 std::to_string(brute.below) + " vs classes " + std::to_string(cls_path.above) +
                 "/" + std::to_string(cls_path.below));
            continue;
          }
          // Floating path through both weighing backends.
          const double expect =
              brute.below == 0 ? 1.0
                               : static_cast<double>(brute.above) / static_cast<double>(brute.below);
          for (bool structured : {false, true}) {
            EngineOptions opts;
            opts.allow_structured = structured;
            opts.allow_classes = !structured;
            KnowledgeBase kb = p.kb;
            FinitePoint pt;
            try {
              pt = degree_of_belief_at(p.query, kb, n, p.tau, opts);
            } catch (const EnsembleTooLarge&) {
              continue;  // structured backend may decline this shape
            }
            if (brute.below == 0) {
              if (!pt.vacuous) fail("expected vacuous conditioning");
            } else if (std::abs(pt.value - expect) > 1e-12) {
              fail("floating value differs by " + std::to_string(std::abs(pt.value - expect)) +
                   " (" + pt.engine + ")");
            }
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace doxa

#endif  // DOXA_ORACLE_HPP
