#ifndef CCDEG_EXPR_HPP
#define CCDEG_EXPR_HPP

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccdeg/core.hpp"
#include "ccdeg/interval.hpp"

namespace ccdeg {

/// Closed-form real expression over indexed variables.
///
/// Immutable and cheap to copy (shared node ownership). Supported forms are
/// constants, variables, + - * /, unary minus, powers, min, max, abs, exp,
/// sin and cos.
class Expr {
 public:
  enum class Op { constant, variable, neg, add, sub, mul, div, pow, min, max, abs, exp, sin, cos };

  Expr() : Expr(0.0) {}
  Expr(double c) : node_(std::make_shared<Node>(Node{Op::constant, c, 0, {}, {}})) {}  // NOLINT

  static Expr var(std::size_t index) {
    Expr e;
    e.node_ = std::make_shared<Node>(Node{Op::variable, 0.0, index, {}, {}});
    return e;
  }
  static Expr unary(Op op, const Expr& a) {
    Expr e;
    e.node_ = std::make_shared<Node>(Node{op, 0.0, 0, a.node_, {}});
    return e;
  }
  static Expr binary(Op op, const Expr& a, const Expr& b) {
    Expr e;
    e.node_ = std::make_shared<Node>(Node{op, 0.0, 0, a.node_, b.node_});
    return e;
  }

  Op op() const { return node_->op; }
  bool is_constant() const { return node_->op == Op::constant; }
  double constant_value() const { return node_->value; }

  double eval(std::span<const double> vars) const { return eval_node(*node_, vars); }
  double eval(const Vec& x) const { return eval(std::span<const double>(x.data(), x.size())); }

  Interval enclose(std::span<const Interval> vars) const { return enclose_node(*node_, vars); }

  /// Highest variable index referenced plus one.
  std::size_t arity() const { return arity_node(*node_); }

  /// Replace variable `index` by the constant `value`; variables above it
  /// shift down by one.
  Expr bind(std::size_t index, double value) const { return Expr(bind_node(node_, index, value)); }

  std::string str() const { return str_node(*node_); }

 private:
  struct Node {
    Op op;
    double value;
    std::size_t index;
    std::shared_ptr<const Node> a, b;
  };
  using NodePtr = std::shared_ptr<const Node>;

  explicit Expr(NodePtr n) : node_(std::move(n)) {}

  static double eval_node(const Node& n, std::span<const double> v) {
    switch (n.op) {
      case Op::constant: return n.value;
      case Op::variable:
        if (n.index >= v.size()) throw Error(ErrorKind::invalid_argument, "expression variable out of range");
        return v[n.index];
      case Op::neg: return -eval_node(*n.a, v);
      case Op::add: return eval_node(*n.a, v) + eval_node(*n.b, v);
      case Op::sub: return eval_node(*n.a, v) - eval_node(*n.b, v);
      case Op::mul: return eval_node(*n.a, v) * eval_node(*n.b, v);
      case Op::div: return eval_node(*n.a, v) / eval_node(*n.b, v);
      case Op::pow: return std::pow(eval_node(*n.a, v), eval_node(*n.b, v));
      case Op::min: return std::min(eval_node(*n.a, v), eval_node(*n.b, v));
      case Op::max: return std::max(eval_node(*n.a, v), eval_node(*n.b, v));
      case Op::abs: return std::abs(eval_node(*n.a, v));
      case Op::exp: return std::exp(eval_node(*n.a, v));
      case Op::sin: return std::sin(eval_node(*n.a, v));
      case Op::cos: return std::cos(eval_node(*n.a, v));
    }
    return 0.0;
  }

  static Interval enclose_node(const Node& n, std::span<const Interval> v) {
    switch (n.op) {
      case Op::constant: return Interval{n.value};
      case Op::variable:
        if (n.index >= v.size()) throw Error(ErrorKind::invalid_argument, "expression variable out of range");
        return v[n.index];
      case Op::neg: return -enclose_node(*n.a, v);
      case Op::add: return enclose_node(*n.a, v) + enclose_node(*n.b, v);
      case Op::sub: return enclose_node(*n.a, v) - enclose_node(*n.b, v);
      case Op::mul: return enclose_node(*n.a, v) * enclose_node(*n.b, v);
      case Op::div: return enclose_node(*n.a, v) / enclose_node(*n.b, v);
      case Op::pow: return ccdeg::pow(enclose_node(*n.a, v), enclose_node(*n.b, v));
      case Op::min: return ccdeg::min(enclose_node(*n.a, v), enclose_node(*n.b, v));
      case Op::max: return ccdeg::max(enclose_node(*n.a, v), enclose_node(*n.b, v));
      case Op::abs: return ccdeg::abs(enclose_node(*n.a, v));
      case Op::exp: return ccdeg::exp(enclose_node(*n.a, v));
      case Op::sin: return ccdeg::sin(enclose_node(*n.a, v));
      case Op::cos: return ccdeg::cos(enclose_node(*n.a, v));
    }
    return Interval::entire();
  }

  static std::size_t arity_node(const Node& n) {
    if (n.op == Op::variable) return n.index + 1;
    std::size_t r = 0;
    if (n.a) r = std::max(r, arity_node(*n.a));
    if (n.b) r = std::max(r, arity_node(*n.b));
    return r;
  }

  static NodePtr bind_node(const NodePtr& n, std::size_t index, double value) {
    if (n->op == Op::variable) {
      if (n->index == index) return std::make_shared<Node>(Node{Op::constant, value, 0, {}, {}});
      if (n->index > index) return std::make_shared<Node>(Node{Op::variable, 0.0, n->index - 1, {}, {}});
      return n;
    }
    if (!n->a) return n;
    return std::make_shared<Node>(
        Node{n->op, n->value, n->index, bind_node(n->a, index, value), n->b ? bind_node(n->b, index, value) : nullptr});
  }

  static std::string str_node(const Node& n) {
    auto un = [&](const char* f) { return std::string(f) + "(" + str_node(*n.a) + ")"; };
    auto bin = [&](const char* o) { return "(" + str_node(*n.a) + " " + o + " " + str_node(*n.b) + ")"; };
    switch (n.op) {
      case Op::constant: return fmt_num(n.value);
      case Op::variable: return "v" + std::to_string(n.index);
      case Op::neg: return "-(" + str_node(*n.a) + ")";
      case Op::add: return bin("+");
      case Op::sub: return bin("-");
      case Op::mul: return bin("*");
      case Op::div: return bin("/");
      case Op::pow: return bin("^");
      case Op::min: return "min(" + str_node(*n.a) + ", " + str_node(*n.b) + ")";
      case Op::max: return "max(" + str_node(*n.a) + ", " + str_node(*n.b) + ")";
      case Op::abs: return un("abs");
      case Op::exp: return un("exp");
      case Op::sin: return un("sin");
      case Op::cos: return un("cos");
    }
    return "?";
  }

  NodePtr node_;
};

inline Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Expr::Op::add, a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Expr::Op::sub, a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Expr::Op::mul, a, b); }
inline Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Expr::Op::div, a, b); }
inline Expr operator-(const Expr& a) { return Expr::unary(Expr::Op::neg, a); }
inline Expr pow(const Expr& a, const Expr& b) { return Expr::binary(Expr::Op::pow, a, b); }
inline Expr min(const Expr& a, const Expr& b) { return Expr::binary(Expr::Op::min, a, b); }
inline Expr max(const Expr& a, const Expr& b) { return Expr::binary(Expr::Op::max, a, b); }
inline Expr abs(const Expr& a) { return Expr::unary(Expr::Op::abs, a); }
inline Expr exp(const Expr& a) { return Expr::unary(Expr::Op::exp, a); }
inline Expr sin(const Expr& a) { return Expr::unary(Expr::Op::sin, a); }
inline Expr cos(const Expr& a) { return Expr::unary(Expr::Op::cos, a); }

/// Parse failure with a 1-based column into the parsed text.
class ParseError : public Error {
 public:
  ParseError(std::size_t column, const std::string& msg)
      : Error(ErrorKind::parse, "column " + std::to_string(column) + ": " + msg), column_(column), detail_(msg) {}
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t column_;
  std::string detail_;
};

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, std::span<const std::string> names) : s_(text), names_(names) {}

  Expr parse_all() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

  // Entry points for inequality parsing, which needs the raw position.
  Expr parse_sum() {
    Expr e = parse_product();
    for (;;) {
      skip_ws();
      if (accept('+')) e = e + parse_product();
      else if (peek() == '-' ) { ++pos_; e = e - parse_product(); }
      else return e;
    }
  }
  std::size_t pos() const { return pos_; }
  void set_pos(std::size_t p) { pos_ = p; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_ + 1, msg); }

 private:
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr parse_product() {
    Expr e = parse_unary();
    for (;;) {
      if (accept('*')) e = e * parse_unary();
      else if (accept('/')) e = e / parse_unary();
      else return e;
    }
  }
  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }
  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return pow(base, parse_unary());
    return base;
  }
  Expr parse_primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (c == '\0') fail("unexpected end of expression");
    fail("unexpected '" + std::string(1, c) + "'");
  }
  Expr parse_number() {
    const char* begin = s_.data() + pos_;
    const char* end = s_.data() + s_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return Expr(v);
  }
  Expr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string id(s_.substr(start, pos_ - start));
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == id) return Expr::var(i);
    if (id == "pi") return Expr(std::numbers::pi);
    struct Fn {
      const char* name;
      int args;
      Expr::Op op;
    };
    static constexpr Fn fns[] = {{"abs", 1, Expr::Op::abs}, {"exp", 1, Expr::Op::exp}, {"sin", 1, Expr::Op::sin},
                                 {"cos", 1, Expr::Op::cos}, {"min", 2, Expr::Op::min}, {"max", 2, Expr::Op::max},
                                 {"pow", 2, Expr::Op::pow}};
    for (const auto& f : fns) {
      if (id != f.name) continue;
      expect('(');
      Expr a = parse_sum();
      if (f.args == 1) {
        expect(')');
        return Expr::unary(f.op, a);
      }
      expect(',');
      Expr b = parse_sum();
      expect(')');
      return Expr::binary(f.op, a, b);
    }
    pos_ = start;
    fail("unknown identifier '" + id + "'");
  }

  std::string_view s_;
  std::span<const std::string> names_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse an infix expression; `names[i]` binds to variable i.
inline Expr parse_expr(std::string_view text, std::span<const std::string> names) {
  return detail::ExprParser(text, names).parse_all();
}

}  // namespace ccdeg

#endif  // CCDEG_EXPR_HPP
