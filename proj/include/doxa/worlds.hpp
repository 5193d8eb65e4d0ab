// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_WORLDS_HPP
#define DOXA_WORLDS_HPP

#include <cmath>
#include <cstdint>
#include <future>
#include <vector>

#include "doxa/errors.hpp"
#include "doxa/kb.hpp"
#include "doxa/logsum.hpp"
#include "doxa/rational.hpp"

namespace doxa {

/// An isomorphism class of worlds over domain {1..N}: how many elements sit
/// in each predicate atom, plus the atom holding each constant. The class
/// stands for multinomial(N; counts) * prod_j counts[placement[j]] raw
/// worlds; log_weight is the log of that product, -inf when a constant is
/// placed in an empty atom.
struct WorldClass {
  std::vector<int> counts;
  std::vector<int> placement;
  double log_weight = kNegInf;
};

struct WorldEnsemble {
  Vocabulary vocabulary;
  int domain_size = 0;
  std::vector<WorldClass> classes;
  double log_total = kNegInf;  // log sum of weights = N log 2^k + m log N
};

/// log of C(N + K - 1, K - 1) * K^m, the number of (counts, placement) pairs.
inline double log_class_count(int domain_size, int atom_count, int constant_count) {
  double lc = std::lgamma(domain_size + atom_count) - std::lgamma(domain_size + 1.0) -
              std::lgamma(static_cast<double>(atom_count));
  return lc + constant_count * std::log(static_cast<double>(atom_count));
}

namespace detail {

template <typename F>
void visit_counts_from(int remaining, int level, int atom_count, const LogFactorials& lf,
                       std::vector<int>& counts, double lw_partial, F&& fn) {
  if (level == atom_count - 1) {
    counts[static_cast<std::size_t>(level)] = remaining;
    fn(const_cast<const std::vector<int>&>(counts), lw_partial - lf(remaining));
    return;
  }
  for (int c = 0; c <= remaining; ++c) {
    counts[static_cast<std::size_t>(level)] = c;
    visit_counts_from(remaining - c, level + 1, atom_count, lf, counts, lw_partial - lf(c), fn);
  }
}

/// Visits all count vectors (lexicographic, first atom slowest) with the
/// first coordinate restricted to [first_lo, first_hi]. The callback gets
/// (counts, multinomial_log_weight).
template <typename F>
void visit_counts(int domain_size, int atom_count, const LogFactorials& lf, int first_lo,
                  int first_hi, F&& fn) {
  std::vector<int> counts(static_cast<std::size_t>(atom_count), 0);
  if (atom_count == 1) {
    counts[0] = domain_size;
    if (first_lo <= domain_size && domain_size <= first_hi) fn(counts, 0.0);
    return;
  }
  const int hi = std::min(first_hi, domain_size);
  for (int c0 = std::max(0, first_lo); c0 <= hi; ++c0) {
    counts[0] = c0;
    visit_counts_from(domain_size - c0, 1, atom_count, lf, counts, lf(domain_size) - lf(c0), fn);
  }
}

}  // namespace detail

/// All classes for the vocabulary at the given domain size, in lexicographic
/// order of counts and then placements. Zero-weight classes (a constant in
/// an empty atom) are kept with log_weight = -inf so that the class list is
/// exactly the (counts, placement) product space.
inline WorldEnsemble enumerate_classes(const Vocabulary& vocab, int domain_size,
                                       double class_budget = 1e8) {
  if (domain_size <= 0) throw Error("domain size must be positive");
  const int k = vocab.predicate_count();
  const int atoms = vocab.atom_count();
  const int m = vocab.constant_count();
  if (std::exp(log_class_count(domain_size, atoms, m)) > class_budget)
    throw EnsembleTooLarge("class space for N=" + std::to_string(domain_size) + " exceeds budget");

  WorldEnsemble ens;
  ens.vocabulary = vocab;
  ens.domain_size = domain_size;
  const LogFactorials lf(domain_size);

  std::vector<int> placement(static_cast<std::size_t>(m), 0);
  LogSum total;
  detail::visit_counts(domain_size, atoms, lf, 0, domain_size,
                       [&](const std::vector<int>& counts, double base_lw) {
                         // placements in lexicographic order, first constant slowest
                         std::fill(placement.begin(), placement.end(), 0);
                         for (;;) {
                           double lw = base_lw;
                           for (int j = 0; j < m; ++j) {
                             const int c = counts[static_cast<std::size_t>(placement[static_cast<std::size_t>(j)])];
                             if (c == 0) {
                               lw = kNegInf;
                               break;
                             }
                             lw += std::log(static_cast<double>(c));
                           }
                           ens.classes.push_back(WorldClass{counts, placement, lw});
                           total.add(lw);
                           int j = m - 1;
                           for (; j >= 0; --j) {
                             if (++placement[static_cast<std::size_t>(j)] < atoms) break;
                             placement[static_cast<std::size_t>(j)] = 0;
                           }
                           if (j < 0) break;
                         }
                       });
  ens.log_total = total.value();
  (void)k;
  return ens;
}

/// Proportion of elements satisfying num among those satisfying den, inside
/// one class; an empty denominator yields 1. Exact, depends only on counts.
inline Rational proportion_value(const Formula& num, const Formula& den,
                                 const std::vector<int>& counts, int predicate_count) {
  const std::uint64_t dm = den.atom_mask(predicate_count);
  const std::uint64_t nm = num.atom_mask(predicate_count) & dm;
  std::int64_t above = 0, below = 0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if ((dm >> a) & 1) {
      below += counts[a];
      if ((nm >> a) & 1) above += counts[a];
    }
  }
  if (below == 0) return Rational(1);
  return Rational(above, below);
}

inline Rational proportion_value(const Formula& num, const Formula& den, const WorldClass& cls,
                                 const Vocabulary& vocab) {
  return proportion_value(num, den, cls.counts, vocab.predicate_count());
}

/// Whether a proportion constraint holds of a class at tolerance tau:
/// <~ a means value <= a + tau, ~= a means |value - a| <= tau.
inline bool eval_objective(const ProportionConstraint& pc, const WorldClass& cls,
                           const Vocabulary& vocab, const Rational& tau) {
  const Rational v = proportion_value(pc.numerator, pc.denominator, cls, vocab);
  if (!(v <= pc.bound + tau)) return false;
  if (pc.cmp == ProportionConstraint::Cmp::ApproxEq && !(pc.bound - tau <= v)) return false;
  return true;
}

/// Truth of a closed formula in a class; depends only on the placement.
inline bool eval_objective(const Formula& f, const WorldClass& cls) {
  return f.eval_closed(cls.placement);
}

/// A single explicit world: an atom per element, an element per constant.
struct ExplicitWorld {
  std::vector<int> element_atoms;
  std::vector<int> constant_elements;
};

/// Exhaustive world list, the deepest test oracle for the class machinery.
inline std::vector<ExplicitWorld> brute_force_worlds(const Vocabulary& vocab, int domain_size,
                                                     double world_budget = 1e7) {
  const int atoms = vocab.atom_count();
  const int m = vocab.constant_count();
  const double total = domain_size * std::log(static_cast<double>(atoms)) +
                       m * std::log(static_cast<double>(domain_size));
  if (total > std::log(world_budget))
    throw OracleTooLarge("explicit world space exceeds the oracle budget");

  std::vector<ExplicitWorld> out;
  ExplicitWorld w;
  w.element_atoms.assign(static_cast<std::size_t>(domain_size), 0);
  w.constant_elements.assign(static_cast<std::size_t>(m), 0);
  for (;;) {
    out.push_back(w);
    int i = domain_size - 1;
    for (; i >= 0; --i) {
      if (++w.element_atoms[static_cast<std::size_t>(i)] < atoms) break;
      w.element_atoms[static_cast<std::size_t>(i)] = 0;
    }
    if (i >= 0) continue;
    int j = m - 1;
    for (; j >= 0; --j) {
      if (++w.constant_elements[static_cast<std::size_t>(j)] < domain_size) break;
      w.constant_elements[static_cast<std::size_t>(j)] = 0;
    }
    if (j < 0) break;
  }
  return out;
}

inline bool world_satisfies(const Formula& closed, const ExplicitWorld& w) {
  std::vector<int> catoms(w.constant_elements.size());
  for (std::size_t j = 0; j < w.constant_elements.size(); ++j)
    catoms[j] = w.element_atoms[static_cast<std::size_t>(w.constant_elements[j])];
  return closed.eval_closed(catoms);
}

inline Rational world_proportion(const Formula& num, const Formula& den, const ExplicitWorld& w,
                                 int predicate_count) {
  const std::uint64_t dm = den.atom_mask(predicate_count);
  const std::uint64_t nm = num.atom_mask(predicate_count) & dm;
  std::int64_t above = 0, below = 0;
  for (int a : w.element_atoms) {
    if ((dm >> a) & 1) {
      ++below;
      if ((nm >> a) & 1) ++above;
    }
  }
  if (below == 0) return Rational(1);
  return Rational(above, below);
}

inline bool world_satisfies(const ProportionConstraint& pc, const ExplicitWorld& w,
                            int predicate_count, const Rational& tau) {
  const Rational v = world_proportion(pc.numerator, pc.denominator, w, predicate_count);
  if (!(v <= pc.bound + tau)) return false;
  if (pc.cmp == ProportionConstraint::Cmp::ApproxEq && !(pc.bound - tau <= v)) return false;
  return true;
}

}  // namespace doxa

#endif  // DOXA_WORLDS_HPP
