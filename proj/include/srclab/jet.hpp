#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "srclab/errors.hpp"

namespace srclab {

/// Highest derivative order carried by a Jet.
inline constexpr int kMaxJetOrder = 2;

/// Truncated second-order Taylor expansion of a scalar field at a point:
/// value, gradient (order >= 1) and Hessian (order == 2) with respect to the
/// n ambient coordinates. The Hessian is stored densely and every update
/// writes both (i,j) and (j,i), so it stays exactly symmetric.
class Jet {
 public:
  Jet() = default;

  static Jet constant(double value, int n, int order) {
    Jet j(n, order);
    j.value_ = value;
    return j;
  }

  /// The coordinate function x_index evaluated at `value`.
  static Jet coordinate(int index, double value, int n, int order) {
    if (index < 0 || index >= n) {
      throw DimensionMismatch("coordinate index " + std::to_string(index) +
                              " out of range for n = " + std::to_string(n));
    }
    Jet j(n, order);
    j.value_ = value;
    if (order >= 1) j.grad_[index] = 1.0;
    return j;
  }

  /// Builds a jet from raw parts; `hessian` is symmetrized on entry.
  static Jet from_parts(int order, double value, std::span<const double> gradient,
                        std::span<const double> hessian = {}) {
    const int n = static_cast<int>(gradient.size());
    Jet j(n, order);
    j.value_ = value;
    if (order >= 1) j.grad_.assign(gradient.begin(), gradient.end());
    if (order >= 2) {
      if (hessian.size() != static_cast<std::size_t>(n) * n) {
        throw DimensionMismatch("hessian size does not match gradient");
      }
      for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
          const double h = 0.5 * (hessian[a * n + b] + hessian[b * n + a]);
          j.hess_[a * n + b] = h;
          j.hess_[b * n + a] = h;
        }
      }
    }
    return j;
  }

  int order() const noexcept { return order_; }
  int dim() const noexcept { return n_; }
  double value() const noexcept { return value_; }
  double grad(int i) const { return grad_.at(i); }
  double hess(int i, int j) const { return hess_.at(static_cast<std::size_t>(i) * n_ + j); }
  std::span<const double> gradient() const noexcept { return grad_; }
  std::span<const double> hessian() const noexcept { return hess_; }

  /// Drops derivative data above `order`.
  Jet truncated(int order) const {
    if (order > order_) {
      throw OrderExhausted("cannot raise a jet from order " + std::to_string(order_) +
                           " to " + std::to_string(order));
    }
    Jet j(n_, order);
    j.value_ = value_;
    if (order >= 1) j.grad_ = grad_;
    if (order >= 2) j.hess_ = hess_;
    return j;
  }

  Jet operator-() const {
    Jet r = *this;
    r.value_ = -r.value_;
    for (double& g : r.grad_) g = -g;
    for (double& h : r.hess_) h = -h;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    check_compatible(o);
    value_ += o.value_;
    for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] += o.grad_[i];
    for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] += o.hess_[i];
    return *this;
  }

  Jet& operator-=(const Jet& o) {
    check_compatible(o);
    value_ -= o.value_;
    for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] -= o.grad_[i];
    for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] -= o.hess_[i];
    return *this;
  }

  Jet& operator*=(double s) {
    value_ *= s;
    for (double& g : grad_) g *= s;
    for (double& h : hess_) h *= s;
    return *this;
  }

  Jet& operator+=(double s) {
    value_ += s;
    return *this;
  }

  /// Taylor product truncated at the common order.
  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    Jet r(a.n_, a.order_);
    r.value_ = a.value_ * b.value_;
    if (a.order_ >= 1) {
      for (int i = 0; i < a.n_; ++i) r.grad_[i] = a.value_ * b.grad_[i] + b.value_ * a.grad_[i];
    }
    if (a.order_ >= 2) {
      const int n = a.n_;
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          const std::size_t ij = static_cast<std::size_t>(i) * n + j;
          const double h = a.value_ * b.hess_[ij] + b.value_ * a.hess_[ij] +
                           a.grad_[i] * b.grad_[j] + a.grad_[j] * b.grad_[i];
          r.hess_[ij] = h;
          r.hess_[static_cast<std::size_t>(j) * n + i] = h;
        }
      }
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }

  /// Composes a univariate function through the jet given f(u), f'(u), f''(u).
  Jet compose(double f0, double f1, double f2) const {
    Jet r(n_, order_);
    r.value_ = f0;
    if (order_ >= 1) {
      for (int i = 0; i < n_; ++i) r.grad_[i] = f1 * grad_[i];
    }
    if (order_ >= 2) {
      for (int i = 0; i < n_; ++i) {
        for (int j = i; j < n_; ++j) {
          const std::size_t ij = static_cast<std::size_t>(i) * n_ + j;
          const double h = f1 * hess_[ij] + f2 * grad_[i] * grad_[j];
          r.hess_[ij] = h;
          r.hess_[static_cast<std::size_t>(j) * n_ + i] = h;
        }
      }
    }
    return r;
  }

  friend Jet reciprocal(const Jet& u) {
    if (u.value_ == 0.0) throw DomainError("division by zero");
    const double inv = 1.0 / u.value_;
    return u.compose(inv, -inv * inv, 2.0 * inv * inv * inv);
  }

  friend Jet sin(const Jet& u) {
    const double s = std::sin(u.value_), c = std::cos(u.value_);
    return u.compose(s, c, -s);
  }
  friend Jet cos(const Jet& u) {
    const double s = std::sin(u.value_), c = std::cos(u.value_);
    return u.compose(c, -s, -c);
  }
  friend Jet exp(const Jet& u) {
    const double e = std::exp(u.value_);
    return u.compose(e, e, e);
  }
  friend Jet log(const Jet& u) {
    if (!(u.value_ > 0.0)) throw DomainError("log of non-positive value");
    const double inv = 1.0 / u.value_;
    return u.compose(std::log(u.value_), inv, -inv * inv);
  }
  friend Jet sqrt(const Jet& u) {
    if (u.value_ < 0.0) throw DomainError("sqrt of negative value");
    const double s = std::sqrt(u.value_);
    if (u.order_ == 0) return u.compose(s, 0.0, 0.0);
    if (s == 0.0) throw DomainError("sqrt is not differentiable at 0");
    return u.compose(s, 0.5 / s, -0.25 / (s * u.value_));
  }
  friend Jet ipow(const Jet& u, int k) {
    if (k < 0) throw DomainError("negative integer exponent");
    if (k == 0) return Jet::constant(1.0, u.n_, u.order_);
    const double x = u.value_;
    const double f0 = std::pow(x, k);
    const double f1 = k * std::pow(x, k - 1);
    const double f2 = k >= 2 ? static_cast<double>(k) * (k - 1) * std::pow(x, k - 2) : 0.0;
    return u.compose(f0, f1, f2);
  }

  friend bool operator==(const Jet&, const Jet&) = default;

 private:
  Jet(int n, int order) : n_(n), order_(order) {
    if (order < 0 || order > kMaxJetOrder) {
      throw OrderExhausted("jet order " + std::to_string(order) + " not in {0,1,2}");
    }
    if (order >= 1) grad_.assign(n, 0.0);
    if (order >= 2) hess_.assign(static_cast<std::size_t>(n) * n, 0.0);
  }

  void check_compatible(const Jet& o) const {
    if (o.n_ != n_) throw DimensionMismatch("jet dimension mismatch");
    if (o.order_ != order_) throw DimensionMismatch("jet order mismatch");
  }

  int n_ = 0;
  int order_ = 0;
  double value_ = 0.0;
  std::vector<double> grad_;
  std::vector<double> hess_;
};

/// Derivative of `f` along the vector field whose coordinate components are
/// `direction`, returned as a jet of `order`. Needs f at order+1 and the
/// direction at `order`; the product rule carries the direction's own
/// gradient into the result.
inline Jet derive(const Jet& f, std::span<const Jet> direction, int order) {
  const int n = f.dim();
  if (static_cast<int>(direction.size()) != n) {
    throw DimensionMismatch("direction has " + std::to_string(direction.size()) +
                            " components, expected " + std::to_string(n));
  }
  if (order + 1 > f.order()) {
    throw OrderExhausted("order-" + std::to_string(order) + " derivative needs an order-" +
                         std::to_string(order + 1) + " jet, have order " +
                         std::to_string(f.order()));
  }
  Jet r = Jet::constant(0.0, n, order);
  std::vector<double> row(n, 0.0);
  for (int m = 0; m < n; ++m) {
    if (direction[m].order() < order) {
      throw OrderExhausted("direction component carries too few derivatives");
    }
    // d_m f as a jet of `order`, scaled by the direction component.
    if (order >= 1) {
      for (int a = 0; a < n; ++a) row[a] = f.hess(m, a);
    }
    const Jet dmf = Jet::from_parts(order, f.grad(m), row);
    r += dmf * direction[m].truncated(order);
  }
  return r;
}

}  // namespace srclab
