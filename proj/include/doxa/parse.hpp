// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_PARSE_HPP
#define DOXA_PARSE_HPP

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "doxa/errors.hpp"
#include "doxa/kb.hpp"

namespace doxa {

struct ParseOptions {
  int predicate_cap = Vocabulary::kDefaultPredicateCap;
};

namespace detail {

enum class Tok : std::uint8_t {
  Ident,
  Number,
  LParen,
  RParen,
  Semi,
  Dot,
  Amp,
  Eq,        // =
  Le,        // <=
  ApproxEq,  // ~=
  ApproxLe,  // <~
  Slash,
  Star,
  Comma,
  Newline,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    int depth = 0;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      if (c == '\n') {
        if (depth == 0) out.push_back(make(Tok::Newline, "\n"));
        advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const int ln = line_, col = col_;
        std::string word;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                src_[pos_] == '\'')) {
          word.push_back(src_[pos_]);
          advance();
        }
        out.push_back(Token{Tok::Ident, word, ln, col});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        const int ln = line_, col = col_;
        std::string num;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '.')) {
          // A dot ends the number unless a digit follows: "1." is the
          // integer one followed by the section terminator.
          if (src_[pos_] == '.' &&
              (pos_ + 1 >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))))
            break;
          num.push_back(src_[pos_]);
          advance();
        }
        out.push_back(Token{Tok::Number, num, ln, col});
        continue;
      }
      const int ln = line_, col = col_;
      switch (c) {
        case '(':
          ++depth;
          advance();
          out.push_back(Token{Tok::LParen, "(", ln, col});
          break;
        case ')':
          if (depth > 0) --depth;
          advance();
          out.push_back(Token{Tok::RParen, ")", ln, col});
          break;
        case ';':
          advance();
          out.push_back(Token{Tok::Semi, ";", ln, col});
          break;
        case '.':
          advance();
          out.push_back(Token{Tok::Dot, ".", ln, col});
          break;
        case '&':
          advance();
          out.push_back(Token{Tok::Amp, "&", ln, col});
          break;
        case '=':
          advance();
          out.push_back(Token{Tok::Eq, "=", ln, col});
          break;
        case '<':
          advance();
          if (pos_ < src_.size() && src_[pos_] == '=') {
            advance();
            out.push_back(Token{Tok::Le, "<=", ln, col});
          } else if (pos_ < src_.size() && src_[pos_] == '~') {
            advance();
            out.push_back(Token{Tok::ApproxLe, "<~", ln, col});
          } else {
            throw ParseError(ln, col, "expected <= or <~");
          }
          break;
        case '~':
          advance();
          if (pos_ < src_.size() && src_[pos_] == '=') {
            advance();
            out.push_back(Token{Tok::ApproxEq, "~=", ln, col});
          } else {
            throw ParseError(ln, col, "expected ~=");
          }
          break;
        case '/':
          advance();
          out.push_back(Token{Tok::Slash, "/", ln, col});
          break;
        case '*':
          advance();
          out.push_back(Token{Tok::Star, "*", ln, col});
          break;
        case ',':
          advance();
          out.push_back(Token{Tok::Comma, ",", ln, col});
          break;
        default:
          throw ParseError(ln, col, std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back(Token{Tok::End, "", line_, col_});
    return out;
  }

 private:
  Token make(Tok k, std::string text) const { return Token{k, std::move(text), line_, col_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, ParseOptions opts)
      : toks_(std::move(tokens)), opts_(opts) {}

  KnowledgeBase run() {
    parse_header();
    parse_items();
    expect(Tok::End, "end of input");
    return kb_;
  }

 private:
  static bool is_keyword(const std::string& w) {
    return w == "pred" || w == "const" || w == "prop" || w == "bel" || w == "and" || w == "or" ||
           w == "not" || w == "true" || w == "x" || w == "forall" || w == "exists";
  }

  const Token& peek(int ahead = 0) const {
    const std::size_t i = pos_ + static_cast<std::size_t>(ahead);
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  void skip_newlines() {
    while (peek().kind == Tok::Newline) ++pos_;
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(t.line, t.column, msg);
  }
  const Token& expect(Tok k, const std::string& what) {
    const Token& t = peek();
    if (t.kind != k) fail(t, "expected " + what);
    return next();
  }

  void parse_header() {
    skip_newlines();
    const Token& p = peek();
    if (!(p.kind == Tok::Ident && p.text == "pred"))
      fail(p, "expected vocabulary header starting with 'pred'");
    next();
    std::vector<std::string> preds = parse_name_list();
    skip_newlines();
    const Token& c = peek();
    if (!(c.kind == Tok::Ident && c.text == "const"))
      fail(c, "expected 'const' section after predicates");
    next();
    std::vector<std::string> consts = parse_name_list();
    if (static_cast<int>(preds.size()) > opts_.predicate_cap)
      throw RangeError(p.line, p.column,
                       "too many predicates (" + std::to_string(preds.size()) + "), cap is " +
                           std::to_string(opts_.predicate_cap));
    try {
      kb_.vocabulary = Vocabulary(std::move(preds), std::move(consts), opts_.predicate_cap);
    } catch (const Error& e) {
      throw ParseError(p.line, p.column, e.what());
    }
  }

  std::vector<std::string> parse_name_list() {
    std::vector<std::string> names;
    for (;;) {
      skip_newlines();
      const Token& t = peek();
      if (t.kind == Tok::Dot) {
        next();
        return names;
      }
      if (t.kind != Tok::Ident) fail(t, "expected a name or '.'");
      if (is_keyword(t.text)) fail(t, "'" + t.text + "' is a reserved word");
      names.push_back(t.text);
      next();
    }
  }

  void parse_items() {
    skip_separators();
    while (peek().kind != Tok::End) {
      parse_item();
      const Token& t = peek();
      if (t.kind == Tok::End) break;
      if (t.kind != Tok::Amp && t.kind != Tok::Newline)
        fail(t, "expected '&' or a line break between conjuncts");
      skip_separators();
    }
  }

  void skip_separators() {
    while (peek().kind == Tok::Amp || peek().kind == Tok::Newline) ++pos_;
  }

  void parse_item() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "prop") {
      parse_proportion();
      return;
    }
    if (t.kind == Tok::Ident && t.text == "bel") {
      parse_belief();
      return;
    }
    const Token at = t;
    Formula f = parse_formula();
    if (f.uses_variable())
      fail(at, "a fact must be a closed formula; found free variable x");
    if (!f.is_true_literal()) kb_.facts.push_back(std::move(f));
  }

  void parse_proportion() {
    next();  // prop
    expect(Tok::LParen, "'(' after prop");
    const Token at = peek();
    ProportionConstraint pc;
    pc.numerator = parse_formula();
    if (peek().kind == Tok::Semi) {
      next();
      pc.denominator = parse_formula();
    }
    if (!pc.numerator.constants().empty() || !pc.denominator.constants().empty())
      throw UnsupportedFragment(at.line, at.column,
                                "proportion formulas must be open in x, not mention constants");
    expect(Tok::RParen, "')'");
    const Token& cmp = next();
    if (cmp.kind == Tok::ApproxEq) {
      pc.cmp = ProportionConstraint::Cmp::ApproxEq;
    } else if (cmp.kind == Tok::ApproxLe) {
      pc.cmp = ProportionConstraint::Cmp::ApproxLe;
    } else if (cmp.kind == Tok::Eq || cmp.kind == Tok::Le) {
      fail(cmp, "proportions are compared approximately; use ~= or <~");
    } else {
      fail(cmp, "expected ~= or <~");
    }
    pc.bound = parse_bound();
    kb_.statistical.push_back(std::move(pc));
  }

  void parse_belief() {
    next();  // bel
    expect(Tok::LParen, "'(' after bel");
    const Token at = peek();
    BeliefConstraint bc;
    bc.event = parse_formula();
    if (peek().kind == Tok::Semi) {
      next();
      bc.condition = parse_formula();
    }
    if (bc.event.uses_variable() || bc.condition.uses_variable())
      throw UnsupportedFragment(at.line, at.column,
                                "belief formulas must be closed; found free variable x");
    expect(Tok::RParen, "')'");
    const Token& cmp = next();
    if (cmp.kind == Tok::Eq) {
      bc.cmp = BeliefConstraint::Cmp::Eq;
    } else if (cmp.kind == Tok::Le) {
      bc.cmp = BeliefConstraint::Cmp::Le;
    } else if (cmp.kind == Tok::ApproxEq || cmp.kind == Tok::ApproxLe) {
      fail(cmp, "degrees of belief are compared exactly; use = or <=");
    } else {
      fail(cmp, "expected = or <=");
    }
    const Token& rhs = peek();
    if (rhs.kind == Tok::Ident && (rhs.text == "bel" || rhs.text == "prop"))
      throw UnsupportedFragment(rhs.line, rhs.column,
                                "belief expressions may only be bounded by numbers; products or "
                                "sums of belief terms are not supported");
    bc.bound = parse_bound();
    if (peek().kind == Tok::Star)
      throw UnsupportedFragment(peek().line, peek().column,
                                "products of belief expressions are not supported");
    kb_.beliefs.push_back(std::move(bc));
  }

  Rational parse_bound() {
    const Token at = peek();
    Rational r = parse_number();
    if (r < Rational(0) || r > Rational(1))
      throw RangeError(at.line, at.column, "bound " + r.str() + " outside [0,1]");
    return r;
  }

  Rational parse_number() {
    const Token& t = expect(Tok::Number, "a number");
    const std::string& s = t.text;
    const auto dot = s.find('.');
    std::int64_t num = 0, den = 1;
    try {
      if (dot == std::string::npos) {
        num = std::stoll(s);
      } else {
        const std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
        if (tail.empty() || tail.size() > 15) fail(t, "malformed decimal literal");
        num = std::stoll(head.empty() ? "0" : head);
        for (char ch : tail) {
          num = num * 10 + (ch - '0');
          den *= 10;
        }
      }
    } catch (const std::exception&) {
      fail(t, "malformed number");
    }
    if (peek().kind == Tok::Slash) {
      if (dot != std::string::npos) fail(t, "mixed decimal and fraction");
      next();
      const Token& d = expect(Tok::Number, "a denominator");
      std::int64_t dv = 0;
      try {
        dv = std::stoll(d.text);
      } catch (const std::exception&) {
        fail(d, "malformed denominator");
      }
      if (dv == 0) fail(d, "zero denominator");
      return Rational(num, dv);
    }
    return Rational(num, den);
  }

  Formula parse_formula() { return parse_or(); }

  Formula parse_or() {
    Formula f = parse_and();
    while (peek().kind == Tok::Ident && peek().text == "or") {
      next();
      f = Formula::disjunction(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (peek().kind == Tok::Ident && peek().text == "and") {
      next();
      f = Formula::conjunction(std::move(f), parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "not") {
      next();
      return Formula::negation(parse_unary());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      next();
      Formula f = parse_formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind != Tok::Ident) fail(t, "expected a formula");
    if (t.text == "true") {
      next();
      return Formula::truth();
    }
    if (t.text == "forall" || t.text == "exists")
      throw UnsupportedFragment(t.line, t.column, "quantifiers are not supported");
    if (t.text == "bel" || t.text == "prop")
      throw UnsupportedFragment(t.line, t.column,
                                "nested belief or proportion terms are not supported");
    const Token name = next();
    const auto pi = kb_.vocabulary.predicate_index(name.text);
    if (!pi) {
      if (kb_.vocabulary.constant_index(name.text))
        fail(name, "'" + name.text + "' is a constant, not a predicate");
      fail(name, "unknown predicate '" + name.text + "'");
    }
    expect(Tok::LParen, "'(' after predicate name");
    Term arg = parse_term();
    if (peek().kind == Tok::Comma)
      throw UnsupportedFragment(peek().line, peek().column,
                                "only unary predicates are supported");
    expect(Tok::RParen, "')'");
    return Formula::pred(*pi, arg);
  }

  Term parse_term() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail(t, "expected x or a constant name");
    if (t.text == "x") {
      next();
      return Term::x();
    }
    const auto ci = kb_.vocabulary.constant_index(t.text);
    if (!ci) {
      if (kb_.vocabulary.predicate_index(t.text))
        fail(t, "'" + t.text + "' is a predicate, not a term");
      fail(t, "unknown constant '" + t.text + "'");
    }
    next();
    return Term::con(*ci);
  }

  std::vector<Token> toks_;
  ParseOptions opts_;
  std::size_t pos_ = 0;
  KnowledgeBase kb_;
};

}  // namespace detail

inline KnowledgeBase parse_knowledge_base(std::string_view text, ParseOptions opts = {}) {
  detail::Lexer lex(text);
  detail::Parser parser(lex.run(), opts);
  return parser.run();
}

/// Canonical text form. parse(render(kb)) is structurally equal to kb.
inline std::string render(const KnowledgeBase& kb) {
  std::string out = "pred";
  for (const auto& p : kb.vocabulary.predicates()) out += " " + p;
  out += ".\nconst";
  for (const auto& c : kb.vocabulary.constants()) out += " " + c;
  out += ".\n";
  const auto& v = kb.vocabulary;
  for (const auto& pc : kb.statistical) {
    out += "prop(" + pc.numerator.str(v);
    if (!pc.denominator.is_true_literal()) out += "; " + pc.denominator.str(v);
    out += pc.cmp == ProportionConstraint::Cmp::ApproxEq ? ") ~= " : ") <~ ";
    out += pc.bound.str() + "\n";
  }
  for (const auto& f : kb.facts) out += f.str(v) + "\n";
  for (const auto& bc : kb.beliefs) {
    out += "bel(" + bc.event.str(v);
    if (!bc.condition.is_true_literal()) out += "; " + bc.condition.str(v);
    out += bc.cmp == BeliefConstraint::Cmp::Eq ? ") = " : ") <= ";
    out += bc.bound.str() + "\n";
  }
  if (kb.statistical.empty() && kb.facts.empty() && kb.beliefs.empty()) out += "true\n";
  return out;
}

/// Structural equality of whole knowledge bases (used by round-trip tests).
inline bool structurally_equal(const KnowledgeBase& a, const KnowledgeBase& b) {
  if (!(a.vocabulary == b.vocabulary)) return false;
  if (a.statistical.size() != b.statistical.size() || a.facts.size() != b.facts.size() ||
      a.beliefs.size() != b.beliefs.size())
    return false;
  for (std::size_t i = 0; i < a.statistical.size(); ++i) {
    const auto& x = a.statistical[i];
    const auto& y = b.statistical[i];
    if (!(x.numerator.equals(y.numerator) && x.denominator.equals(y.denominator) &&
          x.cmp == y.cmp && x.bound == y.bound))
      return false;
  }
  for (std::size_t i = 0; i < a.facts.size(); ++i)
    if (!a.facts[i].equals(b.facts[i])) return false;
  for (std::size_t i = 0; i < a.beliefs.size(); ++i) {
    const auto& x = a.beliefs[i];
    const auto& y = b.beliefs[i];
    if (!(x.event.equals(y.event) && x.condition.equals(y.condition) && x.cmp == y.cmp &&
          x.bound == y.bound))
      return false;
  }
  return true;
}

}  // namespace doxa

#endif  // DOXA_PARSE_HPP
