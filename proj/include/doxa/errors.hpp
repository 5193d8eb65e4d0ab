// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_ERRORS_HPP
#define DOXA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace doxa {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input text does not conform to the knowledge-base grammar.
struct ParseError : Error {
  int line = 0;
  int column = 0;
  ParseError(int ln, int col, const std::string& msg)
      : Error("parse error at " + std::to_string(ln) + ":" + std::to_string(col) + ": " + msg),
        line(ln),
        column(col) {}
};

// Syntactically recognizable but outside the supported unary fragment
// (quantifiers, n-ary predicates, nested or multiplied belief terms, ...).
struct UnsupportedFragment : ParseError {
  using ParseError::ParseError;
};

// Numeric bound outside [0,1], or a vocabulary beyond the configured caps.
struct RangeError : ParseError {
  using ParseError::ParseError;
};

struct KindMismatch : Error {
  using Error::Error;
};

struct AtomCoverage : Error {
  using Error::Error;
};

struct NotAboutConstant : Error {
  using Error::Error;
};

struct NameClash : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct ZeroMassCell : Error {
  using Error::Error;
};

struct EnsembleTooLarge : Error {
  using Error::Error;
};

struct OracleTooLarge : Error {
  using Error::Error;
};

}  // namespace doxa

#endif  // DOXA_ERRORS_HPP
