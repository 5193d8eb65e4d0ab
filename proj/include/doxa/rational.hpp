// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_RATIONAL_HPP
#define DOXA_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <string>

#include "doxa/errors.hpp"

namespace doxa {

/// Exact rational arithmetic. Constraint bounds, tolerances and finite
/// proportions all live here so that world evaluation is bit-reproducible;
/// conversion to floating point happens only at the solver boundary.
///
/// Numerator and denominator stay within int64; all quantities in this
/// engine are bounds in [0,1] and counts up to the domain size, so
/// comparisons via 128-bit cross multiplication never overflow.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }
  // NOLINTNEXTLINE(google-explicit-constructor): integers are rationals.
  constexpr Rational(std::int64_t num) : num_(num), den_(1) {}

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  bool is_zero() const { return num_ == 0; }

  Rational operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  Rational operator-(const Rational& o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  Rational operator*(const Rational& o) const { return Rational(num_ * o.num_, den_ * o.den_); }
  Rational operator/(const Rational& o) const {
    if (o.num_ == 0) throw Error("rational division by zero");
    return Rational(num_ * o.den_, den_ * o.num_);
  }
  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <= static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

  /// Canonical text form: integers render bare, everything else as "p/q".
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  void normalize() {
    if (den_ == 0) throw Error("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// a/b compared against r without materializing the quotient; b must be >= 0.
/// Used for window tests on integer count pairs.
inline bool ratio_le(std::int64_t a, std::int64_t b, const Rational& r) {
  return static_cast<__int128>(a) * r.den() <= static_cast<__int128>(r.num()) * b;
}
inline bool ratio_ge(std::int64_t a, std::int64_t b, const Rational& r) {
  return static_cast<__int128>(a) * r.den() >= static_cast<__int128>(r.num()) * b;
}

/// Largest integer n with n <= r * m.
inline std::int64_t floor_scaled(const Rational& r, std::int64_t m) {
  const __int128 p = static_cast<__int128>(r.num()) * m;
  const __int128 q = r.den();
  __int128 d = p / q;
  if (p % q != 0 && p < 0) --d;
  return static_cast<std::int64_t>(d);
}

/// Smallest integer n with n >= r * m.
inline std::int64_t ceil_scaled(const Rational& r, std::int64_t m) {
  const __int128 p = static_cast<__int128>(r.num()) * m;
  const __int128 q = r.den();
  __int128 d = p / q;
  if (p % q != 0 && p > 0) ++d;
  return static_cast<std::int64_t>(d);
}

}  // namespace doxa

#endif  // DOXA_RATIONAL_HPP
