#pragma once

// Small expression language for Lagrangians L(t, u, v, w).
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | identifier | function '(' expr ')' | '(' expr ')'
//
// Identifiers t, u, v, w are the Lagrangian arguments; any other identifier
// is a named parameter bound at evaluation time. Functions: sin cos exp log
// sqrt. Partials with respect to (u, v, w) up to second order are computed
// with truncated Taylor arithmetic; t is never differentiated.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "dfcv/errors.hpp"

namespace dfcv {

using ParameterMap = std::map<std::string, double, std::less<>>;

/// Value of L with its gradient and Hessian in (u, v, w).
struct SecondOrderValue {
  enum Axis : std::size_t { U = 0, V = 1, W = 2 };

  double value = 0.0;
  std::array<double, 3> grad{};
  std::array<std::array<double, 3>, 3> hess{};

  double d(Axis a) const { return grad[a]; }
  double dd(Axis a, Axis b) const { return hess[a][b]; }
};

namespace expr {

enum class Variable { t, u, v, w };
enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { sin, cos, exp, log, sqrt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Literal {
  double value;
};
struct VariableRef {
  Variable var;
};
struct Parameter {
  std::string name;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs, rhs;
};
struct Call {
  Function fn;
  NodePtr arg;
};

struct Node {
  std::variant<Literal, VariableRef, Parameter, Negate, Binary, Call> data;
};

/// Truncated second-order Taylor jet in the three directions (u, v, w).
/// The Hessian is stored as its upper triangle.
struct Jet {
  double v = 0.0;
  std::array<double, 3> g{};
  std::array<double, 6> h{};

  static constexpr std::size_t idx(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return i == 0 ? j : (i == 1 ? 2 + j : 5);
  }

  bool is_constant() const {
    for (double x : g)
      if (x != 0.0) return false;
    for (double x : h)
      if (x != 0.0) return false;
    return true;
  }

  static Jet constant(double x) { return Jet{x, {}, {}}; }
  static Jet seed(double x, std::size_t axis) {
    Jet j{x, {}, {}};
    j.g[axis] = 1.0;
    return j;
  }

  // f(x) given f, f', f'' at x.v
  Jet chain(double f0, double f1, double f2) const {
    Jet r;
    r.v = f0;
    for (std::size_t i = 0; i < 3; ++i) r.g[i] = f1 * g[i];
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i; j < 3; ++j) r.h[idx(i, j)] = f1 * h[idx(i, j)] + f2 * g[i] * g[j];
    return r;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    r.v = a.v + b.v;
    for (std::size_t i = 0; i < 3; ++i) r.g[i] = a.g[i] + b.g[i];
    for (std::size_t i = 0; i < 6; ++i) r.h[i] = a.h[i] + b.h[i];
    return r;
  }
  friend Jet operator-(const Jet& a) {
    Jet r;
    r.v = -a.v;
    for (std::size_t i = 0; i < 3; ++i) r.g[i] = -a.g[i];
    for (std::size_t i = 0; i < 6; ++i) r.h[i] = -a.h[i];
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.v = a.v * b.v;
    for (std::size_t i = 0; i < 3; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i; j < 3; ++j)
        r.h[idx(i, j)] = a.v * b.h[idx(i, j)] + b.v * a.h[idx(i, j)] + a.g[i] * b.g[j] + a.g[j] * b.g[i];
    return r;
  }
};

namespace detail {

inline bool is_integer_value(double x) { return std::isfinite(x) && std::floor(x) == x && std::abs(x) < 1e9; }

inline double value(double x) { return x; }
inline double value(const Jet& x) { return x.v; }
inline bool is_constant(double) { return true; }
inline bool is_constant(const Jet& x) { return x.is_constant(); }

inline double reciprocal(double x) {
  if (x == 0.0) throw DomainError("division by zero");
  return 1.0 / x;
}
inline Jet reciprocal(const Jet& x) {
  if (x.v == 0.0) throw DomainError("division by zero");
  const double r = 1.0 / x.v;
  return x.chain(r, -r * r, 2.0 * r * r * r);
}

template <class S>
S integer_power(S base, long long n) {
  const bool invert = n < 0;
  unsigned long long e = static_cast<unsigned long long>(invert ? -n : n);
  S result = S(1.0);
  while (e > 0) {
    if (e & 1ULL) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return invert ? reciprocal(result) : result;
}

inline double real_power(double base, double exponent) { return std::pow(base, exponent); }
inline Jet real_power(const Jet& base, double exponent) {
  const double x = base.v;
  return base.chain(std::pow(x, exponent), exponent * std::pow(x, exponent - 1.0),
                    exponent * (exponent - 1.0) * std::pow(x, exponent - 2.0));
}

inline double apply(Function fn, double x) {
  switch (fn) {
    case Function::sin: return std::sin(x);
    case Function::cos: return std::cos(x);
    case Function::exp: return std::exp(x);
    case Function::log:
      if (!(x > 0.0)) throw DomainError("log of non-positive value " + std::to_string(x));
      return std::log(x);
    case Function::sqrt:
      if (x < 0.0) throw DomainError("sqrt of negative value " + std::to_string(x));
      return std::sqrt(x);
  }
  return 0.0;
}

inline Jet apply(Function fn, const Jet& x) {
  const double a = x.v;
  switch (fn) {
    case Function::sin: return x.chain(std::sin(a), std::cos(a), -std::sin(a));
    case Function::cos: return x.chain(std::cos(a), -std::sin(a), -std::cos(a));
    case Function::exp: {
      const double e = std::exp(a);
      return x.chain(e, e, e);
    }
    case Function::log:
      if (!(a > 0.0)) throw DomainError("log of non-positive value " + std::to_string(a));
      return x.chain(std::log(a), 1.0 / a, -1.0 / (a * a));
    case Function::sqrt: {
      if (a < 0.0) throw DomainError("sqrt of negative value " + std::to_string(a));
      if (a == 0.0) {
        if (!x.is_constant()) throw DomainError("sqrt is not differentiable at 0");
        return Jet::constant(0.0);
      }
      const double r = std::sqrt(a);
      return x.chain(r, 0.5 / r, -0.25 / (r * a));
    }
  }
  return x;
}

template <class S>
S power(const S& base, const S& exponent) {
  const double e = value(exponent);
  if (is_constant(exponent) && is_integer_value(e)) {
    if (e < 0.0 && value(base) == 0.0) throw DomainError("zero raised to a negative power");
    return integer_power(base, static_cast<long long>(e));
  }
  if (!(value(base) > 0.0))
    throw DomainError("non-integer power of non-positive base " + std::to_string(value(base)));
  if (is_constant(exponent)) return real_power(base, e);
  return apply(Function::exp, exponent * apply(Function::log, base));
}

template <class S>
struct Env {
  double t;
  S u, v, w;
  const ParameterMap* params;
};

template <class S>
S evaluate(const Node& node, const Env<S>& env) {
  return std::visit(
      [&](const auto& n) -> S {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Literal>) {
          return S(n.value);
        } else if constexpr (std::is_same_v<N, VariableRef>) {
          switch (n.var) {
            case Variable::t: return S(env.t);
            case Variable::u: return env.u;
            case Variable::v: return env.v;
            case Variable::w: return env.w;
          }
          return S(0.0);
        } else if constexpr (std::is_same_v<N, Parameter>) {
          if (env.params != nullptr) {
            auto it = env.params->find(n.name);
            if (it != env.params->end()) return S(it->second);
          }
          throw UnboundParameterError("parameter '" + n.name + "' is not bound");
        } else if constexpr (std::is_same_v<N, Negate>) {
          return -evaluate(*n.operand, env);
        } else if constexpr (std::is_same_v<N, Binary>) {
          const S a = evaluate(*n.lhs, env);
          const S b = evaluate(*n.rhs, env);
          switch (n.op) {
            case BinaryOp::add: return a + b;
            case BinaryOp::sub: return a - b;
            case BinaryOp::mul: return a * b;
            case BinaryOp::div: return a * reciprocal(b);
            case BinaryOp::pow: return power(a, b);
          }
          return a;
        } else {
          return apply(n.fn, evaluate(*n.arg, env));
        }
      },
      node.data);
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, "expected expression, found end of input");
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ < src_.size()) throw SyntaxError(pos_, std::string("unexpected '") + src_[pos_] + "' after expression");
    return e;
  }

 private:
  static NodePtr make(auto&& data) { return std::make_shared<const Node>(Node{std::forward<decltype(data)>(data)}); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = make(Binary{BinaryOp::add, lhs, parse_term()});
      else if (accept('-'))
        lhs = make(Binary{BinaryOp::sub, lhs, parse_term()});
      else
        return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Binary{BinaryOp::mul, lhs, parse_unary()});
      else if (accept('/'))
        lhs = make(Binary{BinaryOp::div, lhs, parse_unary()});
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make(Negate{parse_unary()});
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make(Binary{BinaryOp::pow, base, parse_unary()});
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, "expected number, identifier or '(', found end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      if (!accept(')')) throw SyntaxError(pos_, "expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw SyntaxError(pos_, std::string("expected number, identifier or '(', found '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw SyntaxError(start, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw SyntaxError(pos_, "expected exponent digits");
    }
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) throw SyntaxError(start, "malformed number");
    return make(Literal{value});
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    skip_ws();
    const bool call = pos_ < src_.size() && src_[pos_] == '(';
    static const std::map<std::string_view, Function> functions = {{"sin", Function::sin},
                                                                   {"cos", Function::cos},
                                                                   {"exp", Function::exp},
                                                                   {"log", Function::log},
                                                                   {"sqrt", Function::sqrt}};
    const auto fn = functions.find(name);
    if (call) {
      if (fn == functions.end()) throw UnknownFunctionError("unknown function '" + name + "' at offset " + std::to_string(start));
      ++pos_;
      NodePtr arg = parse_expr();
      if (!accept(')')) throw SyntaxError(pos_, "expected ')' to close call to " + name);
      return make(Call{fn->second, arg});
    }
    if (fn != functions.end()) throw SyntaxError(pos_, "expected '(' after function name " + name);
    if (name == "t") return make(VariableRef{Variable::t});
    if (name == "u") return make(VariableRef{Variable::u});
    if (name == "v") return make(VariableRef{Variable::v});
    if (name == "w") return make(VariableRef{Variable::w});
    return make(Parameter{name});
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

inline const char* op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
    case BinaryOp::pow: return "^";
  }
  return "?";
}

inline const char* function_name(Function fn) {
  switch (fn) {
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::exp: return "exp";
    case Function::log: return "log";
    case Function::sqrt: return "sqrt";
  }
  return "?";
}

inline void print(const Node& node, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Literal>) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.17g", n.value);
          out += buf;
        } else if constexpr (std::is_same_v<N, VariableRef>) {
          out += "tuvw"[static_cast<int>(n.var)];
        } else if constexpr (std::is_same_v<N, Parameter>) {
          out += n.name;
        } else if constexpr (std::is_same_v<N, Negate>) {
          out += "(-";
          print(*n.operand, out);
          out += ')';
        } else if constexpr (std::is_same_v<N, Binary>) {
          out += '(';
          print(*n.lhs, out);
          out += op_symbol(n.op);
          print(*n.rhs, out);
          out += ')';
        } else {
          out += function_name(n.fn);
          out += '(';
          print(*n.arg, out);
          out += ')';
        }
      },
      node.data);
}

inline void collect_parameters(const Node& node, std::set<std::string>& names) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Parameter>) {
          names.insert(n.name);
        } else if constexpr (std::is_same_v<N, Negate>) {
          collect_parameters(*n.operand, names);
        } else if constexpr (std::is_same_v<N, Binary>) {
          collect_parameters(*n.lhs, names);
          collect_parameters(*n.rhs, names);
        } else if constexpr (std::is_same_v<N, Call>) {
          collect_parameters(*n.arg, names);
        }
      },
      node.data);
}

}  // namespace detail

/// Immutable parsed expression. Copies share the tree.
class Expression {
 public:
  static Expression parse(std::string_view source) { return Expression(detail::Parser(source).parse()); }

  explicit Expression(NodePtr root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }

  double eval(double t, double u, double v, double w, const ParameterMap& params = {}) const {
    return detail::evaluate<double>(*root_, {t, u, v, w, &params});
  }

  SecondOrderValue eval_with_partials(double t, double u, double v, double w, const ParameterMap& params = {}) const {
    const Jet j = detail::evaluate<Jet>(*root_, {t, Jet::seed(u, 0), Jet::seed(v, 1), Jet::seed(w, 2), &params});
    SecondOrderValue r;
    r.value = j.v;
    r.grad = j.g;
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = a; b < 3; ++b) r.hess[a][b] = r.hess[b][a] = j.h[Jet::idx(a, b)];
    return r;
  }

  /// Fully parenthesized text that parses back to an equivalent tree.
  std::string to_string() const {
    std::string s;
    detail::print(*root_, s);
    return s;
  }

  std::set<std::string> parameters() const {
    std::set<std::string> names;
    detail::collect_parameters(*root_, names);
    return names;
  }

 private:
  NodePtr root_;
};

}  // namespace expr

using expr::Expression;

}  // namespace dfcv
