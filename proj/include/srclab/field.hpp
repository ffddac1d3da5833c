#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "srclab/expression.hpp"
#include "srclab/jet.hpp"

namespace srclab {

/// A scalar field that can be evaluated to a jet at any point. Each field
/// records the highest jet order it can deliver; asking for more is an
/// OrderExhausted error, never a silent truncation.
class ScalarField {
 public:
  using Evaluator = std::function<Jet(std::span<const double>, int)>;

  ScalarField(int dim, int max_order, Evaluator eval)
      : dim_(dim), max_order_(max_order), eval_(std::make_shared<const Evaluator>(std::move(eval))) {}

  static ScalarField from_expression(const Expression& e, int dim) {
    if (e.max_coordinate() >= dim) {
      throw DimensionMismatch("expression references a coordinate beyond dimension " + std::to_string(dim));
    }
    return ScalarField(dim, kMaxJetOrder, [e](std::span<const double> p, int order) {
      return jet_eval(e, p, order);
    });
  }

  static ScalarField constant(double v, int dim) {
    return ScalarField(dim, kMaxJetOrder, [v, dim](std::span<const double>, int order) {
      return Jet::constant(v, dim, order);
    });
  }

  int dim() const noexcept { return dim_; }
  int max_order() const noexcept { return max_order_; }

  Jet evaluate(std::span<const double> point, int order) const {
    if (static_cast<int>(point.size()) != dim_) {
      throw DimensionMismatch("point has " + std::to_string(point.size()) + " entries, field expects " +
                              std::to_string(dim_));
    }
    if (order > max_order_) {
      throw OrderExhausted("field supports jets up to order " + std::to_string(max_order_) +
                           ", order " + std::to_string(order) + " requested");
    }
    return (*eval_)(point, order);
  }

  double value(std::span<const double> point) const { return evaluate(point, 0).value(); }

 private:
  int dim_;
  int max_order_;
  std::shared_ptr<const Evaluator> eval_;
};

/// Coordinate components X^k of X = sum_k X^k d_k.
using VectorField = std::vector<ScalarField>;

inline VectorField vector_field(std::span<const Expression> components) {
  const int n = static_cast<int>(components.size());
  VectorField v;
  v.reserve(n);
  for (const auto& c : components) v.push_back(ScalarField::from_expression(c, n));
  return v;
}

inline int max_order(const VectorField& v) {
  int m = kMaxJetOrder;
  for (const auto& c : v) m = std::min(m, c.max_order());
  return m;
}

inline std::vector<Jet> evaluate(const VectorField& v, std::span<const double> point, int order) {
  std::vector<Jet> out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(c.evaluate(point, order));
  return out;
}

/// The field X(f). Its order-k jet consumes the order-(k+1) jet of f and the
/// order-k jets of the direction's components.
inline ScalarField directional_derivative(const ScalarField& field, const VectorField& direction) {
  if (static_cast<int>(direction.size()) != field.dim()) {
    throw DimensionMismatch("direction has " + std::to_string(direction.size()) +
                            " components, field lives in dimension " + std::to_string(field.dim()));
  }
  const int order = std::min(field.max_order() - 1, max_order(direction));
  // An exhausted result still exists; evaluating it reports OrderExhausted.
  return ScalarField(field.dim(), std::max(order, -1), [field, direction](std::span<const double> p, int k) {
    const Jet f = field.evaluate(p, k + 1);
    const std::vector<Jet> dir = evaluate(direction, p, k);
    return derive(f, dir, k);
  });
}

/// Central finite difference of `field` along the vector direction(point),
/// compared with the jet directional derivative. Returns
/// |jet - fd| / max(1, |jet|).
inline double fd_crosscheck(const ScalarField& field, std::span<const double> point, const VectorField& direction,
                            double step) {
  if (!(step > 0.0)) throw DomainError("finite-difference step must be positive");
  const double exact = directional_derivative(field, direction).value(point);
  std::vector<double> v(point.size());
  for (std::size_t m = 0; m < point.size(); ++m) v[m] = direction[m].value(point);
  std::vector<double> plus(point.begin(), point.end()), minus(point.begin(), point.end());
  for (std::size_t m = 0; m < point.size(); ++m) {
    plus[m] += step * v[m];
    minus[m] -= step * v[m];
  }
  const double fd = (field.value(plus) - field.value(minus)) / (2.0 * step);
  return std::abs(exact - fd) / std::max(1.0, std::abs(exact));
}

}  // namespace srclab
