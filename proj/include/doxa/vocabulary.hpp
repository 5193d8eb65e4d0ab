// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_VOCABULARY_HPP
#define DOXA_VOCABULARY_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "doxa/errors.hpp"

namespace doxa {

/// Declared unary predicates and constants. Declaration order is canonical:
/// predicate i supplies bit i of an atom index, so the same vocabulary text
/// always yields the same atom numbering.
class Vocabulary {
 public:
  static constexpr int kDefaultPredicateCap = 6;

  Vocabulary() = default;
  Vocabulary(std::vector<std::string> predicates, std::vector<std::string> constants,
             int predicate_cap = kDefaultPredicateCap)
      : predicates_(std::move(predicates)), constants_(std::move(constants)) {
    if (static_cast<int>(predicates_.size()) > predicate_cap)
      throw Error("vocabulary declares " + std::to_string(predicates_.size()) +
                  " predicates, cap is " + std::to_string(predicate_cap));
    for (std::size_t i = 0; i < predicates_.size(); ++i)
      for (std::size_t j = i + 1; j < predicates_.size(); ++j)
        if (predicates_[i] == predicates_[j])
          throw Error("duplicate predicate name: " + predicates_[i]);
    for (std::size_t i = 0; i < constants_.size(); ++i)
      for (std::size_t j = i + 1; j < constants_.size(); ++j)
        if (constants_[i] == constants_[j]) throw Error("duplicate constant name: " + constants_[i]);
    for (const auto& p : predicates_)
      for (const auto& c : constants_)
        if (p == c) throw Error("name used as both predicate and constant: " + p);
  }

  int predicate_count() const { return static_cast<int>(predicates_.size()); }
  int constant_count() const { return static_cast<int>(constants_.size()); }

  /// 2^k predicate atoms.
  int atom_count() const { return 1 << predicate_count(); }

  const std::vector<std::string>& predicates() const { return predicates_; }
  const std::vector<std::string>& constants() const { return constants_; }

  const std::string& predicate_name(int i) const { return predicates_[static_cast<std::size_t>(i)]; }
  const std::string& constant_name(int i) const { return constants_[static_cast<std::size_t>(i)]; }

  std::optional<int> predicate_index(const std::string& name) const {
    auto it = std::find(predicates_.begin(), predicates_.end(), name);
    if (it == predicates_.end()) return std::nullopt;
    return static_cast<int>(it - predicates_.begin());
  }
  std::optional<int> constant_index(const std::string& name) const {
    auto it = std::find(constants_.begin(), constants_.end(), name);
    if (it == constants_.end()) return std::nullopt;
    return static_cast<int>(it - constants_.begin());
  }

  /// Extends with a fresh predicate (appended, so existing atom indices keep
  /// their low bits). Throws NameClash if the name is taken.
  Vocabulary with_predicate(const std::string& name) const {
    if (predicate_index(name) || constant_index(name))
      throw NameClash("name already in vocabulary: " + name);
    auto preds = predicates_;
    preds.push_back(name);
    return Vocabulary(std::move(preds), constants_);
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.predicates_ == b.predicates_ && a.constants_ == b.constants_;
  }

 private:
  std::vector<std::string> predicates_;
  std::vector<std::string> constants_;
};

}  // namespace doxa

#endif  // DOXA_VOCABULARY_HPP
