#pragma once

// Integer polynomial constraint expressions and their recursive-descent parser.
//
//   constraints := expr (';' expr)*
//   expr        := term (('+' | '-') term)*
//   term        := factor ('*' factor)*
//   factor      := atom ('^' uint)?
//   atom        := int | 'x' uint | '(' expr ')'
//
// Evaluation is exact: 128-bit arithmetic with overflow detection, falling
// back to arbitrary precision when a value leaves that range.

#include <cctype>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mds/core.hpp"

namespace mds {

inline constexpr i64 kMaxPowerExponent = 64;

struct Expr {
  enum class Op { Literal, Variable, Add, Sub, Mul, Pow };
  Op op;
  i64 value = 0;  // literal value, variable index (1-based) or exponent
  std::shared_ptr<const Expr> lhs, rhs;
};

using ExprPtr = std::shared_ptr<const Expr>;

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

namespace detail {

struct EvalOverflow {};

inline i128 ev_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw EvalOverflow{};
  return r;
}
inline i128 ev_sub(i128 a, i128 b) {
  i128 r;
  if (__builtin_sub_overflow(a, b, &r)) throw EvalOverflow{};
  return r;
}
inline i128 ev_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw EvalOverflow{};
  return r;
}

using BigInt = boost::multiprecision::cpp_int;
inline BigInt ev_add(const BigInt& a, const BigInt& b) { return a + b; }
inline BigInt ev_sub(const BigInt& a, const BigInt& b) { return a - b; }
inline BigInt ev_mul(const BigInt& a, const BigInt& b) { return a * b; }

template <class Int>
Int evaluate_as(const Expr& e, std::span<const i64> x) {
  switch (e.op) {
    case Expr::Op::Literal: return Int(e.value);
    case Expr::Op::Variable: return Int(x[static_cast<std::size_t>(e.value - 1)]);
    case Expr::Op::Add: return ev_add(evaluate_as<Int>(*e.lhs, x), evaluate_as<Int>(*e.rhs, x));
    case Expr::Op::Sub: return ev_sub(evaluate_as<Int>(*e.lhs, x), evaluate_as<Int>(*e.rhs, x));
    case Expr::Op::Mul: return ev_mul(evaluate_as<Int>(*e.lhs, x), evaluate_as<Int>(*e.rhs, x));
    case Expr::Op::Pow: {
      Int base = evaluate_as<Int>(*e.lhs, x), r(1);
      for (i64 k = 0; k < e.value; ++k) r = ev_mul(r, base);
      return r;
    }
  }
  return Int(0);
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t t) : text_(text), t_(t) {}

  std::vector<ExprPtr> parse_all(std::vector<std::string>& sources) {
    std::vector<ExprPtr> out;
    while (true) {
      skip_ws();
      if (at_end()) break;
      if (peek() == ';') {
        advance();
        continue;
      }
      std::size_t start = pos_;
      out.push_back(expr());
      sources.emplace_back(trim(text_.substr(start, pos_ - start)));
      skip_ws();
      if (at_end()) break;
      if (peek() != ';') fail(std::string("expected ';' or operator, found '") + peek() + "'");
      advance();
    }
    return out;
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  }

  ExprPtr expr() {
    ExprPtr left = term();
    while (true) {
      skip_ws();
      if (at_end() || (peek() != '+' && peek() != '-')) return left;
      Expr::Op op = peek() == '+' ? Expr::Op::Add : Expr::Op::Sub;
      advance();
      left = std::make_shared<const Expr>(Expr{op, 0, left, term()});
    }
  }

  ExprPtr term() {
    ExprPtr left = factor();
    while (true) {
      skip_ws();
      if (at_end() || peek() != '*') return left;
      advance();
      left = std::make_shared<const Expr>(Expr{Expr::Op::Mul, 0, left, factor()});
    }
  }

  ExprPtr factor() {
    ExprPtr base = atom();
    skip_ws();
    if (at_end() || peek() != '^') return base;
    advance();
    skip_ws();
    auto [line, col] = location();
    i64 e = uint_literal("exponent");
    if (e > kMaxPowerExponent)
      throw ParseError("exponent " + std::to_string(e) + " exceeds " + std::to_string(kMaxPowerExponent), line, col);
    return std::make_shared<const Expr>(Expr{Expr::Op::Pow, e, base, nullptr});
  }

  ExprPtr atom() {
    skip_ws();
    if (at_end()) fail("unexpected end of input");
    char c = peek();
    if (c == '(') {
      advance();
      ExprPtr inner = expr();
      skip_ws();
      if (at_end() || peek() != ')') fail("expected ')'");
      advance();
      return inner;
    }
    if (c == 'x') {
      auto [line, col] = location();
      advance();
      if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected variable index after 'x'");
      i64 idx = uint_literal("variable index");
      if (idx < 1 || static_cast<std::size_t>(idx) > t_)
        throw ParseError("variable x" + std::to_string(idx) + " out of range 1.." + std::to_string(t_), line, col);
      return std::make_shared<const Expr>(Expr{Expr::Op::Variable, idx, nullptr, nullptr});
    }
    if (std::isdigit(static_cast<unsigned char>(c)))
      return std::make_shared<const Expr>(Expr{Expr::Op::Literal, uint_literal("integer literal"), nullptr, nullptr});
    fail(std::string("unexpected character '") + c + "'");
  }

  i64 uint_literal(const char* what) {
    auto [line, col] = location();
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail(std::string("expected ") + what);
    i64 v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      if (__builtin_mul_overflow(v, 10, &v) || __builtin_add_overflow(v, peek() - '0', &v))
        throw ParseError(std::string(what) + " overflows 64-bit range", line, col);
      advance();
    }
    return v;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  std::pair<int, int> location() const { return {line_, col_}; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  std::string_view text_;
  std::size_t t_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

}  // namespace detail

/// Exact value of an expression at an integer point (x[0] is x1).
inline bool expr_is_zero(const Expr& e, std::span<const i64> x) {
  try {
    return detail::evaluate_as<i128>(e, x) == 0;
  } catch (const detail::EvalOverflow&) {
    return detail::evaluate_as<detail::BigInt>(e, x) == 0;
  }
}

inline std::string expr_value_string(const Expr& e, std::span<const i64> x) {
  try {
    return to_string(detail::evaluate_as<i128>(e, x));
  } catch (const detail::EvalOverflow&) {
    return detail::evaluate_as<detail::BigInt>(e, x).str();
  }
}

}  // namespace mds
