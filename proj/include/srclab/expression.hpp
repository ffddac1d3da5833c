#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "srclab/errors.hpp"
#include "srclab/jet.hpp"

namespace srclab {

enum class Function { kSin, kCos, kExp, kLog, kSqrt };

inline const char* function_name(Function f) {
  switch (f) {
    case Function::kSin: return "sin";
    case Function::kCos: return "cos";
    case Function::kExp: return "exp";
    case Function::kLog: return "log";
    case Function::kSqrt: return "sqrt";
  }
  return "?";
}

/// Immutable expression tree over the ambient coordinates. Copies share
/// nodes; nothing is ever mutated after construction.
class Expression {
 public:
  enum class Kind { kConstant, kCoordinate, kAdd, kSubtract, kMultiply, kDivide, kNegate, kPower, kApply };

  Expression() : Expression(constant(0.0)) {}

  static Expression constant(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kConstant;
    n->value = v;
    return Expression(std::move(n));
  }
  static Expression coordinate(int index) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kCoordinate;
    n->index = index;
    return Expression(std::move(n));
  }
  static Expression power(Expression base, int exponent) {
    if (exponent < 0) throw DomainError("negative exponent in expression");
    auto n = std::make_shared<Node>();
    n->kind = Kind::kPower;
    n->index = exponent;
    n->args = {std::move(base)};
    return Expression(std::move(n));
  }
  static Expression apply(Function f, Expression arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kApply;
    n->fn = f;
    n->args = {std::move(arg)};
    return Expression(std::move(n));
  }

  friend Expression operator+(Expression a, Expression b) { return binary(Kind::kAdd, std::move(a), std::move(b)); }
  friend Expression operator-(Expression a, Expression b) { return binary(Kind::kSubtract, std::move(a), std::move(b)); }
  friend Expression operator*(Expression a, Expression b) { return binary(Kind::kMultiply, std::move(a), std::move(b)); }
  friend Expression operator/(Expression a, Expression b) { return binary(Kind::kDivide, std::move(a), std::move(b)); }
  friend Expression operator-(Expression a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::kNegate;
    n->args = {std::move(a)};
    return Expression(std::move(n));
  }

  Kind kind() const noexcept { return node_->kind; }
  double constant_value() const noexcept { return node_->value; }
  /// Coordinate index for kCoordinate, exponent for kPower.
  int index() const noexcept { return node_->index; }
  Function function() const noexcept { return node_->fn; }
  std::span<const Expression> args() const noexcept { return node_->args; }

  bool is_constant(double v) const noexcept { return kind() == Kind::kConstant && constant_value() == v; }

  /// Largest coordinate index referenced, or -1.
  int max_coordinate() const {
    int m = kind() == Kind::kCoordinate ? index() : -1;
    for (const auto& a : args()) m = std::max(m, a.max_coordinate());
    return m;
  }

  /// Exact structural equality (no canonicalization).
  friend bool operator==(const Expression& a, const Expression& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::kConstant:
        return a.constant_value() == b.constant_value() &&
               std::signbit(a.constant_value()) == std::signbit(b.constant_value());
      case Kind::kCoordinate: return a.index() == b.index();
      case Kind::kPower:
        if (a.index() != b.index()) return false;
        break;
      case Kind::kApply:
        if (a.function() != b.function()) return false;
        break;
      default: break;
    }
    if (a.args().size() != b.args().size()) return false;
    for (std::size_t i = 0; i < a.args().size(); ++i) {
      if (!(a.args()[i] == b.args()[i])) return false;
    }
    return true;
  }

 private:
  struct Node {
    Kind kind = Kind::kConstant;
    double value = 0.0;
    int index = 0;
    Function fn = Function::kSin;
    std::vector<Expression> args;
  };

  explicit Expression(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Expression binary(Kind k, Expression a, Expression b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->args = {std::move(a), std::move(b)};
    return Expression(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

/// Folds negate(constant c) into constant(-c), recursively. This is the only
/// rewrite; it exists because a printed negative literal reparses as a
/// negation.
inline Expression canonicalize(const Expression& e) {
  using K = Expression::Kind;
  switch (e.kind()) {
    case K::kConstant:
      return e.constant_value() == 0.0 ? Expression::constant(0.0) : e;
    case K::kCoordinate: return e;
    case K::kNegate: {
      Expression a = canonicalize(e.args()[0]);
      if (a.kind() == K::kConstant) return Expression::constant(-a.constant_value() + 0.0);
      return -a;
    }
    case K::kPower: return Expression::power(canonicalize(e.args()[0]), e.index());
    case K::kApply: return Expression::apply(e.function(), canonicalize(e.args()[0]));
    case K::kAdd: return canonicalize(e.args()[0]) + canonicalize(e.args()[1]);
    case K::kSubtract: return canonicalize(e.args()[0]) - canonicalize(e.args()[1]);
    case K::kMultiply: return canonicalize(e.args()[0]) * canonicalize(e.args()[1]);
    case K::kDivide: return canonicalize(e.args()[0]) / canonicalize(e.args()[1]);
  }
  return e;
}

inline bool equivalent(const Expression& a, const Expression& b) {
  return canonicalize(a) == canonicalize(b);
}

/// Value, gradient and Hessian (up to `order`) of `expr` at `point`.
inline Jet jet_eval(const Expression& expr, std::span<const double> point, int order) {
  using K = Expression::Kind;
  const int n = static_cast<int>(point.size());
  switch (expr.kind()) {
    case K::kConstant: return Jet::constant(expr.constant_value(), n, order);
    case K::kCoordinate:
      if (expr.index() >= n) {
        throw DimensionMismatch("expression references coordinate " + std::to_string(expr.index()) +
                                " but the point has " + std::to_string(n) + " entries");
      }
      return Jet::coordinate(expr.index(), point[expr.index()], n, order);
    case K::kAdd: return jet_eval(expr.args()[0], point, order) + jet_eval(expr.args()[1], point, order);
    case K::kSubtract: return jet_eval(expr.args()[0], point, order) - jet_eval(expr.args()[1], point, order);
    case K::kMultiply: return jet_eval(expr.args()[0], point, order) * jet_eval(expr.args()[1], point, order);
    case K::kDivide: return jet_eval(expr.args()[0], point, order) / jet_eval(expr.args()[1], point, order);
    case K::kNegate: return -jet_eval(expr.args()[0], point, order);
    case K::kPower: return ipow(jet_eval(expr.args()[0], point, order), expr.index());
    case K::kApply: {
      const Jet u = jet_eval(expr.args()[0], point, order);
      switch (expr.function()) {
        case Function::kSin: return sin(u);
        case Function::kCos: return cos(u);
        case Function::kExp: return exp(u);
        case Function::kLog: return log(u);
        case Function::kSqrt: return sqrt(u);
      }
    }
  }
  throw DomainError("malformed expression");
}

inline double eval_value(const Expression& expr, std::span<const double> point) {
  return jet_eval(expr, point, 0).value();
}

/// Shortest decimal that reads back to the same double.
inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), end);
}

/// Prints `e` in the manifold description grammar, fully parenthesized so that
/// parsing the result gives back an equivalent tree.
inline std::string to_string(const Expression& e, std::span<const std::string> coords) {
  using K = Expression::Kind;
  auto primary = [&](const Expression& a) {
    const bool bare = (a.kind() == K::kConstant && !std::signbit(a.constant_value())) ||
                      a.kind() == K::kCoordinate || a.kind() == K::kApply;
    return bare ? to_string(a, coords) : "(" + to_string(a, coords) + ")";
  };
  switch (e.kind()) {
    case K::kConstant:
      if (!std::isfinite(e.constant_value())) throw DomainError("non-finite constant");
      if (std::signbit(e.constant_value())) return "(-" + format_number(-e.constant_value()) + ")";
      return format_number(e.constant_value());
    case K::kCoordinate:
      if (e.index() < static_cast<int>(coords.size())) return coords[e.index()];
      return "x" + std::to_string(e.index());
    case K::kAdd: return "(" + to_string(e.args()[0], coords) + " + " + to_string(e.args()[1], coords) + ")";
    case K::kSubtract: return "(" + to_string(e.args()[0], coords) + " - " + to_string(e.args()[1], coords) + ")";
    case K::kMultiply: return "(" + to_string(e.args()[0], coords) + " * " + to_string(e.args()[1], coords) + ")";
    case K::kDivide: return "(" + to_string(e.args()[0], coords) + " / " + to_string(e.args()[1], coords) + ")";
    case K::kNegate: return "(-" + primary(e.args()[0]) + ")";
    case K::kPower: return primary(e.args()[0]) + "^" + std::to_string(e.index());
    case K::kApply: return std::string(function_name(e.function())) + "(" + to_string(e.args()[0], coords) + ")";
  }
  return "?";
}

}  // namespace srclab
