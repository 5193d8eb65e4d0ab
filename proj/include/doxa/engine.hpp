// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_ENGINE_HPP
#define DOXA_ENGINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "doxa/kb.hpp"
#include "doxa/logsum.hpp"
#include "doxa/rational.hpp"
#include "doxa/worlds.hpp"

namespace doxa {

/// One degree-of-belief evaluation point: the statistical constraints select
/// classes at tolerance tau, and every class's weight is binned by the truth
/// pattern of the tracked closed formulas (bit i of a bucket index = tracked
/// formula i holds). Conditioning, belief-event masses and query values are
/// all ratios of bucket sums, so a single pass serves a whole method step.
struct CountQuery {
  Vocabulary vocabulary;
  std::vector<ProportionConstraint> statistical;
  std::vector<Formula> tracked;
  Rational tau = Rational(1, 10);
};

struct BucketWeights {
  int bits = 0;
  std::vector<double> log_weight;  // size 1 << bits, kNegInf where empty
  std::string engine;              // "classes" or "structured"

  double log_mass(std::uint32_t require_mask) const {
    LogSum s;
    for (std::size_t b = 0; b < log_weight.size(); ++b)
      if ((b & require_mask) == require_mask) s.add(log_weight[b]);
    return s.value();
  }
};

struct EngineOptions {
  double class_budget = 1e8;  // (counts, placement) pairs for the class engine
  double term_budget = 4e8;   // inner terms for the structured engine
  bool allow_structured = true;
  bool allow_classes = true;
};

namespace detail {

struct Window {
  std::uint64_t num_mask = 0;  // atoms of num & den
  std::uint64_t den_mask = 0;  // atoms of den
  Rational lo;                 // used only when has_lo
  Rational hi;
  bool has_lo = false;

  bool accepts(std::int64_t above, std::int64_t below) const {
    if (below == 0) return (Rational(1) <= hi) && (!has_lo || lo <= Rational(1));
    if (!ratio_le(above, below, hi)) return false;
    if (has_lo && !ratio_ge(above, below, lo)) return false;
    return true;
  }
};

inline std::vector<Window> make_windows(const std::vector<ProportionConstraint>& statistical,
                                        int predicate_count, const Rational& tau) {
  std::vector<Window> ws;
  ws.reserve(statistical.size());
  for (const auto& pc : statistical) {
    Window w;
    w.den_mask = pc.denominator.atom_mask(predicate_count);
    w.num_mask = pc.numerator.atom_mask(predicate_count) & w.den_mask;
    w.hi = pc.bound + tau;
    if (pc.cmp == ProportionConstraint::Cmp::ApproxEq) {
      w.lo = pc.bound - tau;
      w.has_lo = true;
    }
    ws.push_back(w);
  }
  return ws;
}

/// Class-enumeration backend: walks every (counts, placement) pair.
inline BucketWeights weigh_buckets_classes(const CountQuery& q, int domain_size,
                                           const EngineOptions& opts) {
  const Vocabulary& vocab = q.vocabulary;
  const int atoms = vocab.atom_count();
  const int m = vocab.constant_count();
  if (std::exp(log_class_count(domain_size, atoms, m)) > opts.class_budget)
    throw EnsembleTooLarge("class space for N=" + std::to_string(domain_size) +
                           " exceeds the class budget");

  const auto windows = make_windows(q.statistical, vocab.predicate_count(), q.tau);
  const int bits = static_cast<int>(q.tracked.size());
  if (bits > 20) throw Error("too many tracked formulas");

  // Bucket of each joint placement tuple, precomputed once.
  std::int64_t tuples = 1;
  for (int j = 0; j < m; ++j) tuples *= atoms;
  std::vector<std::uint32_t> tuple_bucket(static_cast<std::size_t>(tuples), 0);
  {
    std::vector<int> catoms(static_cast<std::size_t>(m), 0);
    for (std::int64_t t = 0; t < tuples; ++t) {
      std::int64_t rem = t;
      for (int j = m - 1; j >= 0; --j) {
        catoms[static_cast<std::size_t>(j)] = static_cast<int>(rem % atoms);
        rem /= atoms;
      }
      std::uint32_t b = 0;
      for (int i = 0; i < bits; ++i)
        if (q.tracked[static_cast<std::size_t>(i)].eval_closed(catoms)) b |= 1u << i;
      tuple_bucket[static_cast<std::size_t>(t)] = b;
    }
  }

  const LogFactorials lf(domain_size);
  std::vector<LogSum> acc(static_cast<std::size_t>(1) << bits);

  std::vector<std::int64_t> above(windows.size()), below(windows.size());
  detail::visit_counts(
      domain_size, atoms, lf, 0, domain_size, [&](const std::vector<int>& counts, double base_lw) {
        for (std::size_t wi = 0; wi < windows.size(); ++wi) {
          above[wi] = below[wi] = 0;
          for (int a = 0; a < atoms; ++a) {
            if ((windows[wi].den_mask >> a) & 1) {
              below[wi] += counts[static_cast<std::size_t>(a)];
              if ((windows[wi].num_mask >> a) & 1) above[wi] += counts[static_cast<std::size_t>(a)];
            }
          }
          if (!windows[wi].accepts(above[wi], below[wi])) return;
        }
        // Placement loop (lexicographic, first constant slowest).
        std::vector<int> tuple(static_cast<std::size_t>(m), 0);
        for (std::int64_t t = 0;; ++t) {
          double lw = base_lw;
          for (int j = 0; j < m; ++j) {
            const int c = counts[static_cast<std::size_t>(tuple[static_cast<std::size_t>(j)])];
            if (c == 0) {
              lw = kNegInf;
              break;
            }
            lw += std::log(static_cast<double>(c));
          }
          if (lw != kNegInf) acc[tuple_bucket[static_cast<std::size_t>(t)]].add(lw);
          int j = m - 1;
          for (; j >= 0; --j) {
            if (++tuple[static_cast<std::size_t>(j)] < atoms) break;
            tuple[static_cast<std::size_t>(j)] = 0;
          }
          if (j < 0) break;
        }
      });

  BucketWeights out;
  out.bits = bits;
  out.engine = "classes";
  out.log_weight.resize(acc.size());
  for (std::size_t b = 0; b < acc.size(); ++b) out.log_weight[b] = acc[b].value();
  return out;
}

}  // namespace detail

}  // namespace doxa

#endif  // DOXA_ENGINE_HPP
