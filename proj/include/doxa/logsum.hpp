// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_LOGSUM_HPP
#define DOXA_LOGSUM_HPP

#include <cmath>
#include <limits>
#include <vector>

namespace doxa {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Streaming log-sum-exp accumulator with a running max shift, so that sums
/// of multinomial weights stay finite far beyond the range of raw factorials.
/// Accumulation order is fixed by the caller, which keeps results
/// bit-deterministic across runs.
class LogSum {
 public:
  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      if (max_ != kNegInf) sum_ = sum_ * std::exp(max_ - log_term);
      sum_ += 1.0;
      max_ = log_term;
    }
  }

  /// Merges another accumulator; deterministic given a fixed merge order.
  void merge(const LogSum& other) {
    if (other.max_ == kNegInf) return;
    if (other.max_ <= max_) {
      sum_ += other.sum_ * std::exp(other.max_ - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - other.max_) + other.sum_;
      max_ = other.max_;
    }
  }

  bool empty() const { return max_ == kNegInf || sum_ <= 0.0; }

  double value() const {
    if (empty()) return kNegInf;
    return max_ + std::log(sum_);
  }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

/// log(n!) table.  Immutable after construction; share freely across threads.
class LogFactorials {
 public:
  explicit LogFactorials(int max_n) : table_(static_cast<std::size_t>(max_n) + 1) {
    table_[0] = 0.0;
    for (int i = 1; i <= max_n; ++i) table_[i] = table_[i - 1] + std::log(static_cast<double>(i));
  }
  double operator()(int n) const { return table_[static_cast<std::size_t>(n)]; }

  double log_choose(int n, int k) const {
    if (k < 0 || k > n) return kNegInf;
    return table_[n] - table_[k] - table_[n - k];
  }

 private:
  std::vector<double> table_;
};

}  // namespace doxa

#endif  // DOXA_LOGSUM_HPP
