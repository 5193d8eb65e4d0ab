// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_DISTRIBUTION_HPP
#define DOXA_DISTRIBUTION_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "doxa/errors.hpp"
#include "doxa/logsum.hpp"

namespace doxa {

/// A probability vector over a finite indexed outcome space. Labels are
/// optional; when present they index the same outcomes.
class FiniteDistribution {
 public:
  FiniteDistribution() = default;

  explicit FiniteDistribution(std::vector<double> probs, std::vector<std::string> labels = {})
      : p_(std::move(probs)), labels_(std::move(labels)) {
    if (!labels_.empty() && labels_.size() != p_.size())
      throw DimensionMismatch("label/probability size mismatch");
    double sum = 0.0;
    for (double x : p_) {
      if (!(x >= 0.0)) throw Error("negative probability");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw Error("probabilities sum to " + std::to_string(sum));
  }

  /// Builds from nonnegative weights, normalizing.
  static FiniteDistribution normalized(std::vector<double> weights,
                                       std::vector<std::string> labels = {}) {
    double sum = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw Error("negative weight");
      sum += w;
    }
    if (sum <= 0.0) throw Error("cannot normalize zero weights");
    for (double& w : weights) w /= sum;
    // Push rounding slack into the largest coordinate so the total is exact.
    double drift = 1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      drift -= weights[i];
      if (weights[i] > weights[arg]) arg = i;
    }
    weights[arg] += drift;
    return FiniteDistribution(std::move(weights), std::move(labels));
  }

  static FiniteDistribution uniform(int n) {
    return normalized(std::vector<double>(static_cast<std::size_t>(n), 1.0));
  }

  int size() const { return static_cast<int>(p_.size()); }
  double operator[](int i) const { return p_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& probabilities() const { return p_; }
  const std::vector<std::string>& labels() const { return labels_; }

  double mass(const std::vector<int>& outcomes) const {
    double s = 0.0;
    for (int i : outcomes) s += p_[static_cast<std::size_t>(i)];
    return s;
  }

 private:
  std::vector<double> p_;
  std::vector<std::string> labels_;
};

/// -sum mu(w) ln mu(w), with 0 ln 0 = 0. Lies in [0, ln n].
inline double entropy(const FiniteDistribution& mu) {
  double h = 0.0;
  for (int i = 0; i < mu.size(); ++i)
    if (mu[i] > 0.0) h -= mu[i] * std::log(mu[i]);
  return h;
}

/// Directed divergence sum mu'(w) ln(mu'(w)/mu(w)); +infinity exactly when
/// mu' puts mass where mu has none. Nonnegative, zero iff equal.
inline double cross_entropy(const FiniteDistribution& from, const FiniteDistribution& to) {
  if (from.size() != to.size()) throw DimensionMismatch("cross_entropy over different spaces");
  double c = 0.0;
  for (int i = 0; i < from.size(); ++i) {
    if (from[i] <= 0.0) continue;
    if (to[i] <= 0.0) return std::numeric_limits<double>::infinity();
    c += from[i] * std::log(from[i] / to[i]);
  }
  return c < 0.0 && c > -1e-15 ? 0.0 : c;
}

/// Shifts mass between the cells of a partition to the prescribed weights,
/// rescaling uniformly within each cell. Cells must be disjoint and cover
/// the space; weights must sum to 1.
inline FiniteDistribution jeffrey_update(const FiniteDistribution& prior,
                                         const std::vector<std::vector<int>>& partition,
                                         const std::vector<double>& weights) {
  if (partition.size() != weights.size())
    throw DimensionMismatch("one weight per partition cell required");
  std::vector<int> owner(static_cast<std::size_t>(prior.size()), -1);
  double wsum = 0.0;
  for (std::size_t c = 0; c < partition.size(); ++c) {
    if (!(weights[c] >= 0.0)) throw Error("negative cell weight");
    wsum += weights[c];
    for (int i : partition[c]) {
      if (i < 0 || i >= prior.size() || owner[static_cast<std::size_t>(i)] != -1)
        throw Error("partition cells must be disjoint and in range");
      owner[static_cast<std::size_t>(i)] = static_cast<int>(c);
    }
  }
  for (int o : owner)
    if (o < 0) throw Error("partition cells must cover the outcome space");
  if (std::abs(wsum - 1.0) > 1e-12) throw Error("cell weights must sum to 1");

  std::vector<double> out(static_cast<std::size_t>(prior.size()), 0.0);
  for (std::size_t c = 0; c < partition.size(); ++c) {
    double cell_mass = 0.0;
    for (int i : partition[c]) cell_mass += prior[i];
    if (cell_mass <= 0.0) {
      if (weights[c] > 0.0)
        throw ZeroMassCell("cell " + std::to_string(c) + " has zero prior mass but weight " +
                           std::to_string(weights[c]));
      continue;
    }
    for (int i : partition[c])
      out[static_cast<std::size_t>(i)] = prior[i] * (weights[c] / cell_mass);
  }
  return FiniteDistribution(std::move(out), prior.labels());
}

}  // namespace doxa

#endif  // DOXA_DISTRIBUTION_HPP
