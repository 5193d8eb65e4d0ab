// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_LINEAR_HPP
#define DOXA_LINEAR_HPP

#include <vector>

#include "doxa/errors.hpp"
#include "doxa/formula.hpp"
#include "doxa/kb.hpp"

namespace doxa {

/// One linear row a.x (=|<=) b over a probability vector; the simplex
/// constraints (x >= 0, sum = 1) are implicit. Feasible sets of this form
/// are convex, which is what makes the minimum-cross-entropy projection
/// unique when it exists.
struct LinearRow {
  enum class Rel { Eq, Le };
  std::vector<double> coeffs;
  Rel rel = Rel::Eq;
  double bound = 0.0;
};

struct LinearConstraintSet {
  int dimension = 0;
  std::vector<LinearRow> rows;

  void add(LinearRow row) {
    if (static_cast<int>(row.coeffs.size()) != dimension)
      throw DimensionMismatch("constraint row has wrong dimension");
    rows.push_back(std::move(row));
  }
};

/// Linearizes a conjunctive belief base over an atom space by clearing the
/// conditional denominator:
///   bel(e; c) <= a   ->   sum_{atoms |= e and c} x - a * sum_{atoms |= c} x <= 0
/// and the equality analogue. Unconditional constraints reduce to plain
/// event-mass rows with the bound on the right-hand side.
inline LinearConstraintSet compile_belief_base(const std::vector<BeliefConstraint>& beliefs,
                                               const AtomSet& atoms) {
  LinearConstraintSet out;
  out.dimension = atoms.atom_count();
  for (const auto& b : beliefs) {
    LinearRow row;
    row.coeffs.assign(static_cast<std::size_t>(atoms.atom_count()), 0.0);
    row.rel = b.cmp == BeliefConstraint::Cmp::Eq ? LinearRow::Rel::Eq : LinearRow::Rel::Le;
    const double alpha = b.bound.to_double();
    if (b.condition.is_true_literal()) {
      for (int j = 0; j < atoms.atom_count(); ++j)
        if (atoms.atom_satisfies(j, b.event)) row.coeffs[static_cast<std::size_t>(j)] = 1.0;
      row.bound = alpha;
    } else {
      for (int j = 0; j < atoms.atom_count(); ++j) {
        const bool cond = atoms.atom_satisfies(j, b.condition);
        if (!cond) continue;
        double c = -alpha;
        if (atoms.atom_satisfies(j, b.event)) c += 1.0;
        row.coeffs[static_cast<std::size_t>(j)] = c;
      }
      row.bound = 0.0;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace doxa

#endif  // DOXA_LINEAR_HPP
