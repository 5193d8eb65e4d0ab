// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_FORMULA_HPP
#define DOXA_FORMULA_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "doxa/errors.hpp"
#include "doxa/vocabulary.hpp"

namespace doxa {

/// Argument of a predicate: either the designated variable x or a constant.
struct Term {
  bool is_variable = true;
  int constant = -1;  // index into the vocabulary when !is_variable

  static Term x() { return Term{}; }
  static Term con(int index) { return Term{false, index}; }

  friend bool operator==(const Term& a, const Term& b) {
    return a.is_variable == b.is_variable && (a.is_variable || a.constant == b.constant);
  }
};

/// Quantifier-free formula over unary predicates: P(x) or P(c), negation,
/// conjunction, disjunction, and the literal true. Immutable; nodes are
/// shared, so copies are cheap and thread-safe.
class Formula {
 public:
  enum class Kind : std::uint8_t { True, Pred, Not, And, Or };

  Formula() : Formula(truth()) {}

  static Formula truth() {
    static const auto node = std::make_shared<const Node>(Node{Kind::True, -1, Term::x(), {}});
    return Formula(node);
  }
  static Formula pred(int predicate, Term arg) {
    return Formula(std::make_shared<const Node>(Node{Kind::Pred, predicate, arg, {}}));
  }
  static Formula negation(Formula f) {
    return Formula(std::make_shared<const Node>(Node{Kind::Not, -1, Term::x(), {std::move(f)}}));
  }
  static Formula conjunction(Formula a, Formula b) {
    return Formula(
        std::make_shared<const Node>(Node{Kind::And, -1, Term::x(), {std::move(a), std::move(b)}}));
  }
  static Formula disjunction(Formula a, Formula b) {
    return Formula(
        std::make_shared<const Node>(Node{Kind::Or, -1, Term::x(), {std::move(a), std::move(b)}}));
  }

  /// Conjunction of a list; empty list is true.
  static Formula conjoin(const std::vector<Formula>& fs) {
    if (fs.empty()) return truth();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conjunction(acc, fs[i]);
    return acc;
  }

  Kind kind() const { return node_->kind; }
  int predicate() const { return node_->predicate; }
  const Term& arg() const { return node_->arg; }
  const Formula& child(int i) const { return node_->children[static_cast<std::size_t>(i)]; }
  int child_count() const { return static_cast<int>(node_->children.size()); }

  bool is_true_literal() const { return node_->kind == Kind::True; }

  bool uses_variable() const {
    if (node_->kind == Kind::Pred) return node_->arg.is_variable;
    for (const auto& c : node_->children)
      if (c.uses_variable()) return true;
    return false;
  }

  void collect_constants(std::vector<int>& out) const {
    if (node_->kind == Kind::Pred) {
      if (!node_->arg.is_variable) out.push_back(node_->arg.constant);
      return;
    }
    for (const auto& c : node_->children) c.collect_constants(out);
  }

  std::vector<int> constants() const {
    std::vector<int> out;
    collect_constants(out);
    return out;
  }

  /// Closed: no occurrence of x. (A formula may be both closed and free of
  /// constants, e.g. the literal true.)
  bool is_closed() const { return !uses_variable(); }
  /// Unary-open: no constants. Mixed formulas are neither.
  bool is_open() const { return constants().empty(); }

  void collect_predicates(std::vector<int>& out) const {
    if (node_->kind == Kind::Pred) {
      out.push_back(node_->predicate);
      return;
    }
    for (const auto& c : node_->children) c.collect_predicates(out);
  }

  /// Bitmask over the 2^k predicate atoms where this unary-open formula
  /// holds of an element in that atom. Requires k <= 6.
  std::uint64_t atom_mask(int predicate_count) const {
    const int atoms = 1 << predicate_count;
    const std::uint64_t all = atoms == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << atoms) - 1);
    switch (node_->kind) {
      case Kind::True:
        return all;
      case Kind::Pred: {
        if (!node_->arg.is_variable) throw KindMismatch("atom_mask on a non-open formula");
        std::uint64_t m = 0;
        for (int a = 0; a < atoms; ++a)
          if ((a >> node_->predicate) & 1) m |= std::uint64_t{1} << a;
        return m;
      }
      case Kind::Not:
        return all & ~child(0).atom_mask(predicate_count);
      case Kind::And:
        return child(0).atom_mask(predicate_count) & child(1).atom_mask(predicate_count);
      case Kind::Or:
        return child(0).atom_mask(predicate_count) | child(1).atom_mask(predicate_count);
    }
    return 0;
  }

  /// Truth of a closed formula when each constant sits in the given
  /// predicate atom (constant_atoms[i] = atom index of constant i).
  bool eval_closed(const std::vector<int>& constant_atoms) const {
    switch (node_->kind) {
      case Kind::True:
        return true;
      case Kind::Pred: {
        if (node_->arg.is_variable) throw KindMismatch("eval_closed on an open formula");
        const int atom = constant_atoms[static_cast<std::size_t>(node_->arg.constant)];
        return (atom >> node_->predicate) & 1;
      }
      case Kind::Not:
        return !child(0).eval_closed(constant_atoms);
      case Kind::And:
        return child(0).eval_closed(constant_atoms) && child(1).eval_closed(constant_atoms);
      case Kind::Or:
        return child(0).eval_closed(constant_atoms) || child(1).eval_closed(constant_atoms);
    }
    return false;
  }

  /// Structural equality (same shape, predicates, terms).
  bool equals(const Formula& o) const {
    if (node_ == o.node_) return true;
    if (node_->kind != o.node_->kind) return false;
    switch (node_->kind) {
      case Kind::True:
        return true;
      case Kind::Pred:
        return node_->predicate == o.node_->predicate && node_->arg == o.node_->arg;
      default:
        break;
    }
    if (node_->children.size() != o.node_->children.size()) return false;
    for (std::size_t i = 0; i < node_->children.size(); ++i)
      if (!node_->children[i].equals(o.node_->children[i])) return false;
    return true;
  }

  /// Replaces every occurrence of the given constant by x.
  Formula substitute_constant(int constant) const {
    switch (node_->kind) {
      case Kind::True:
        return truth();
      case Kind::Pred:
        if (!node_->arg.is_variable && node_->arg.constant == constant)
          return pred(node_->predicate, Term::x());
        return *this;
      case Kind::Not:
        return negation(child(0).substitute_constant(constant));
      case Kind::And:
        return conjunction(child(0).substitute_constant(constant),
                           child(1).substitute_constant(constant));
      case Kind::Or:
        return disjunction(child(0).substitute_constant(constant),
                           child(1).substitute_constant(constant));
    }
    return truth();
  }

  /// Replaces x by the given constant.
  Formula substitute_variable(int constant) const {
    switch (node_->kind) {
      case Kind::True:
        return truth();
      case Kind::Pred:
        if (node_->arg.is_variable) return pred(node_->predicate, Term::con(constant));
        return *this;
      case Kind::Not:
        return negation(child(0).substitute_variable(constant));
      case Kind::And:
        return conjunction(child(0).substitute_variable(constant),
                           child(1).substitute_variable(constant));
      case Kind::Or:
        return disjunction(child(0).substitute_variable(constant),
                           child(1).substitute_variable(constant));
    }
    return truth();
  }

  std::string str(const Vocabulary& vocab) const { return render(vocab, 0); }

 private:
  struct Node {
    Kind kind;
    int predicate;
    Term arg;
    std::vector<Formula> children;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  // precedence: or(1) < and(2) < not(3)
  std::string render(const Vocabulary& vocab, int parent_prec) const {
    std::string s;
    int prec = 4;
    switch (node_->kind) {
      case Kind::True:
        s = "true";
        break;
      case Kind::Pred:
        s = vocab.predicate_name(node_->predicate) + "(" +
            (node_->arg.is_variable ? std::string("x") : vocab.constant_name(node_->arg.constant)) +
            ")";
        break;
      case Kind::Not:
        prec = 3;
        s = "not " + child(0).render(vocab, prec);
        break;
      case Kind::And:
        // left-associative: a right-nested child of the same kind keeps its
        // parentheses so the parse tree round-trips
        prec = 2;
        s = child(0).render(vocab, prec) + " and " + child(1).render(vocab, prec + 1);
        break;
      case Kind::Or:
        prec = 1;
        s = child(0).render(vocab, prec) + " or " + child(1).render(vocab, prec + 1);
        break;
    }
    if (prec < parent_prec) return "(" + s + ")";
    return s;
  }

  std::shared_ptr<const Node> node_;
};

/// The 2^j sign-conjunctions over a list of generator formulas. Bit i of an
/// atom index set means generator i occurs positively, so the index of an
/// atom is the sum of 2^i over its positive generators.
class AtomSet {
 public:
  AtomSet() = default;

  explicit AtomSet(std::vector<Formula> generators) : generators_(std::move(generators)) {
    if (generators_.size() > 16) throw Error("too many atom generators");
    bool any_open = false, any_closed = false;
    for (const auto& g : generators_) {
      if (g.uses_variable()) any_open = true;
      if (!g.constants().empty()) any_closed = true;
    }
    if (any_open && any_closed)
      throw KindMismatch("atom generators mix open and closed formulas");
  }

  int generator_count() const { return static_cast<int>(generators_.size()); }
  int atom_count() const { return 1 << generator_count(); }
  const std::vector<Formula>& generators() const { return generators_; }

  /// The atom with the given index, as a formula. atoms over [] yield true.
  Formula atom_formula(int index) const {
    if (generators_.empty()) return Formula::truth();
    Formula acc = (index & 1) ? generators_[0] : Formula::negation(generators_[0]);
    for (int i = 1; i < generator_count(); ++i) {
      Formula lit = ((index >> i) & 1) ? generators_[static_cast<std::size_t>(i)]
                                       : Formula::negation(generators_[static_cast<std::size_t>(i)]);
      acc = Formula::conjunction(acc, lit);
    }
    return acc;
  }

  /// Whether the atom with the given sign pattern satisfies a Boolean
  /// combination of the generators. Formulas not expressible over the
  /// generators raise AtomCoverage.
  bool atom_satisfies(int index, const Formula& f) const {
    if (f.is_true_literal()) return true;
    for (int i = 0; i < generator_count(); ++i)
      if (f.equals(generators_[static_cast<std::size_t>(i)])) return (index >> i) & 1;
    switch (f.kind()) {
      case Formula::Kind::Not:
        return !atom_satisfies(index, f.child(0));
      case Formula::Kind::And:
        return atom_satisfies(index, f.child(0)) && atom_satisfies(index, f.child(1));
      case Formula::Kind::Or:
        return atom_satisfies(index, f.child(0)) || atom_satisfies(index, f.child(1));
      default:
        throw AtomCoverage("formula is not a Boolean combination of the atom generators");
    }
  }

 private:
  std::vector<Formula> generators_;
};

inline AtomSet atoms_over(std::vector<Formula> generators) { return AtomSet(std::move(generators)); }

}  // namespace doxa

#endif  // DOXA_FORMULA_HPP
