#pragma once

// A minimal arithmetic-expression language over one variable `s`:
// literals, pi, e, + - * / ^ (right-assoc), unary minus, parentheses, and
// the functions sin cos sinh cosh tanh exp log sqrt abs. Values and exact
// derivatives come from jet evaluation.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "minkcurve/error.hpp"
#include "minkcurve/jet.hpp"

namespace minkcurve {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind { Number, Var, ConstPi, ConstE, Neg, Add, Sub, Mul, Div, Pow, Call };

struct Expr {
  ExprKind kind;
  double number = 0.0;     // Number
  std::string func;        // Call
  ExprPtr a, b;            // operands (a only for Neg/Call)

  static ExprPtr make_number(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Number;
    e->number = v;
    return e;
  }
  static ExprPtr make_var() {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Var;
    return e;
  }
  static ExprPtr make_const(ExprKind k) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
  }
  static ExprPtr make_unary(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Neg;
    e->a = std::move(a);
    return e;
  }
  static ExprPtr make_binary(ExprKind k, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
  }
  static ExprPtr make_call(std::string name, ExprPtr arg) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Call;
    e->func = std::move(name);
    e->a = std::move(arg);
    return e;
  }
};

inline bool is_known_function(const std::string& name) {
  static const char* names[] = {"sin", "cos", "sinh", "cosh", "tanh", "exp", "log", "sqrt", "abs"};
  for (const char* n : names)
    if (name == n) return true;
  return false;
}

namespace detail {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  ExprPtr run() {
    ExprPtr e = parse_sum();
    skip_ws();
    if (pos_ != s_.size())
      raise(ErrorCode::ParseError, "unexpected input", static_cast<long>(pos_));
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  ExprPtr parse_sum() {
    ExprPtr e = parse_product();
    for (;;) {
      if (eat('+'))
        e = Expr::make_binary(ExprKind::Add, e, parse_product());
      else if (eat('-'))
        e = Expr::make_binary(ExprKind::Sub, e, parse_product());
      else
        return e;
    }
  }

  ExprPtr parse_product() {
    ExprPtr e = parse_unary();
    for (;;) {
      if (eat('*'))
        e = Expr::make_binary(ExprKind::Mul, e, parse_unary());
      else if (eat('/'))
        e = Expr::make_binary(ExprKind::Div, e, parse_unary());
      else
        return e;
    }
  }

  ExprPtr parse_unary() {
    if (eat('-')) return Expr::make_unary(parse_unary());
    return parse_power();
  }

  // '^' binds tighter than unary minus and associates to the right; the
  // exponent may itself carry a sign (s^-2).
  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (eat('^')) return Expr::make_binary(ExprKind::Pow, base, parse_unary());
    return base;
  }

  ExprPtr parse_primary() {
    skip_ws();
    if (pos_ >= s_.size())
      raise(ErrorCode::ParseError, "unexpected end of input", static_cast<long>(pos_));
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_sum();
      if (!eat(')'))
        raise(ErrorCode::ParseError, "expected ')'", static_cast<long>(pos_));
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    raise(ErrorCode::ParseError, std::string("unexpected character '") + c + "'",
          static_cast<long>(pos_));
  }

  ExprPtr parse_number() {
    const size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      size_t mark = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // 'e' belonged to something else
      }
    }
    const std::string tok = s_.substr(start, pos_ - start);
    if (tok == "." || tok.empty())
      raise(ErrorCode::ParseError, "malformed number", static_cast<long>(start));
    return Expr::make_number(std::strtod(tok.c_str(), nullptr));
  }

  ExprPtr parse_ident() {
    const size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (peek() == '(') {
      if (!is_known_function(name))
        raise(ErrorCode::UnknownFunction, "unknown function '" + name + "'",
              static_cast<long>(start));
      eat('(');
      ExprPtr arg = parse_sum();
      if (!eat(')'))
        raise(ErrorCode::ParseError, "expected ')'", static_cast<long>(pos_));
      return Expr::make_call(name, arg);
    }
    if (name == "s") return Expr::make_var();
    if (name == "pi") return Expr::make_const(ExprKind::ConstPi);
    if (name == "e") return Expr::make_const(ExprKind::ConstE);
    raise(ErrorCode::ParseError, "unknown identifier '" + name + "'", static_cast<long>(start));
  }

  const std::string& s_;
  size_t pos_ = 0;
};

inline int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    default: return 5;  // atoms and calls never need parentheses
  }
}

}  // namespace detail

inline ExprPtr parse(const std::string& text) { return detail::Parser(text).run(); }

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Canonical printing; parse(print(e)) is structurally equal to e.
inline void print_to(const Expr& e, std::string& out) {
  auto child = [&out](const Expr& c, bool need_parens) {
    if (need_parens) out += '(';
    print_to(c, out);
    if (need_parens) out += ')';
  };
  const int p = detail::precedence(e.kind);
  switch (e.kind) {
    case ExprKind::Number: out += format_number(e.number); return;
    case ExprKind::Var: out += 's'; return;
    case ExprKind::ConstPi: out += "pi"; return;
    case ExprKind::ConstE: out += 'e'; return;
    case ExprKind::Neg:
      out += '-';
      child(*e.a, detail::precedence(e.a->kind) < p);
      return;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div:
      child(*e.a, detail::precedence(e.a->kind) < p);
      out += (e.kind == ExprKind::Add ? '+' : e.kind == ExprKind::Sub ? '-'
              : e.kind == ExprKind::Mul ? '*' : '/');
      // left-associative: an equal-precedence right child keeps its parens
      child(*e.b, detail::precedence(e.b->kind) <= p);
      return;
    case ExprKind::Pow:
      // right-associative and tighter than unary minus
      child(*e.a, detail::precedence(e.a->kind) <= p);
      out += '^';
      child(*e.b, detail::precedence(e.b->kind) < 3);
      return;
    case ExprKind::Call:
      out += e.func;
      out += '(';
      print_to(*e.a, out);
      out += ')';
      return;
  }
}

inline std::string print(const ExprPtr& e) {
  std::string out;
  print_to(*e, out);
  return out;
}

inline bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Number: return a->number == b->number;
    case ExprKind::Var:
    case ExprKind::ConstPi:
    case ExprKind::ConstE: return true;
    case ExprKind::Neg: return structurally_equal(a->a, b->a);
    case ExprKind::Call:
      return a->func == b->func && structurally_equal(a->a, b->a);
    default:
      return structurally_equal(a->a, b->a) && structurally_equal(a->b, b->b);
  }
}

constexpr int kDefaultJetOrder = 6;

// Jet evaluation: coefficient i of the result is the i-th derivative at s.
inline Jet eval_jet(const ExprPtr& e, double s, int order = kDefaultJetOrder) {
  switch (e->kind) {
    case ExprKind::Number: return Jet::constant(e->number, order);
    case ExprKind::Var: return Jet::variable(s, order);
    case ExprKind::ConstPi: return Jet::constant(3.14159265358979323846, order);
    case ExprKind::ConstE: return Jet::constant(2.71828182845904523536, order);
    case ExprKind::Neg: return -eval_jet(e->a, s, order);
    case ExprKind::Add: return eval_jet(e->a, s, order) + eval_jet(e->b, s, order);
    case ExprKind::Sub: return eval_jet(e->a, s, order) - eval_jet(e->b, s, order);
    case ExprKind::Mul: return eval_jet(e->a, s, order) * eval_jet(e->b, s, order);
    case ExprKind::Div: return eval_jet(e->a, s, order) / eval_jet(e->b, s, order);
    case ExprKind::Pow: {
      const Jet base = eval_jet(e->a, s, order);
      // integer exponents go through repeated multiplication for exactness
      if (e->b->kind == ExprKind::Number) {
        const double ev = e->b->number;
        if (ev == std::floor(ev) && std::abs(ev) <= 1e9)
          return jet_pow_int(base, static_cast<long long>(ev));
        return jet_pow_real(base, ev);
      }
      if (e->b->kind == ExprKind::Neg && e->b->a->kind == ExprKind::Number) {
        const double ev = -e->b->a->number;
        if (ev == std::floor(ev) && std::abs(ev) <= 1e9)
          return jet_pow_int(base, static_cast<long long>(ev));
        return jet_pow_real(base, ev);
      }
      const Jet expo = eval_jet(e->b, s, order);
      if (base.value() <= 0.0)
        raise(ErrorCode::DomainError, "non-constant exponent requires a positive base");
      return jet_exp(expo * jet_log(base));
    }
    case ExprKind::Call: {
      const Jet a = eval_jet(e->a, s, order);
      if (e->func == "sin") return jet_sin(a);
      if (e->func == "cos") return jet_cos(a);
      if (e->func == "sinh") return jet_sinh(a);
      if (e->func == "cosh") return jet_cosh(a);
      if (e->func == "tanh") return jet_tanh(a);
      if (e->func == "exp") return jet_exp(a);
      if (e->func == "log") return jet_log(a);
      if (e->func == "sqrt") return jet_sqrt(a);
      if (e->func == "abs") return jet_abs(a);
      raise(ErrorCode::UnknownFunction, "unknown function '" + e->func + "'");
    }
  }
  raise(ErrorCode::PreconditionViolation, "corrupt expression node");
}

inline double eval(const ExprPtr& e, double s) { return eval_jet(e, s, 0).value(); }

}  // namespace minkcurve
