#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srclab/errors.hpp"
#include "srclab/expression.hpp"
#include "srclab/field.hpp"
#include "srclab/linalg.hpp"
#include "srclab/tensor.hpp"

namespace srclab {

/// X = sum_k components[k] d_k.
struct VectorFieldSpec {
  std::string name;
  std::vector<Expression> components;
};

struct CoordinateRange {
  double lo = -1.0;
  double hi = 1.0;
  friend bool operator==(const CoordinateRange&, const CoordinateRange&) = default;
};

/// A sub-Riemannian structure (M, V0, g) on a single global chart.
///
/// The horizontal frame spans V0, the vertical frame spans the chosen
/// complement V1, and `metric` holds g_ij = g(e_i, e_j) for the horizontal
/// frame. `oneform`, when present, gives pi_i = pi(e_i).
struct ManifoldSpec {
  std::string name;
  int n = 0;
  int ell = 0;
  std::vector<std::string> coords;
  std::vector<VectorFieldSpec> hframe;
  std::vector<VectorFieldSpec> vframe;
  std::vector<std::vector<Expression>> metric;
  std::optional<std::vector<Expression>> oneform;
  /// Sampling box, one range per coordinate.
  std::vector<CoordinateRange> box;

  /// Frame vector a: horizontal for a < ell, vertical otherwise.
  const VectorFieldSpec& frame(int a) const { return a < ell ? hframe.at(a) : vframe.at(a - ell); }
};

inline Expression identity_entry(int i, int j) { return Expression::constant(i == j ? 1.0 : 0.0); }

inline std::vector<std::vector<Expression>> identity_metric(int ell) {
  std::vector<std::vector<Expression>> g(ell, std::vector<Expression>(ell));
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j) g[i][j] = identity_entry(i, j);
  return g;
}

/// Structural checks that do not need a point. Line 0 means "not from a
/// source file".
inline void validate(const ManifoldSpec& s, int line = 0) {
  if (s.n < 1) throw ValidationError(line, "dimension must be positive");
  if (s.ell < 2 || s.ell >= s.n) {
    throw ValidationError(line, "horizontal rank must satisfy 2 <= hdim < dim (got hdim = " +
                                    std::to_string(s.ell) + ", dim = " + std::to_string(s.n) + ")");
  }
  if (static_cast<int>(s.coords.size()) != s.n) throw ValidationError(line, "coordinate count differs from dim");
  if (static_cast<int>(s.hframe.size()) != s.ell) throw ValidationError(line, "hframe count differs from hdim");
  if (static_cast<int>(s.vframe.size()) != s.n - s.ell) {
    throw ValidationError(line, "vframe count differs from dim - hdim");
  }
  for (int a = 0; a < s.n; ++a) {
    const auto& f = s.frame(a);
    if (static_cast<int>(f.components.size()) != s.n) {
      throw ValidationError(line, "frame field " + f.name + " does not have dim components");
    }
    for (const auto& c : f.components) {
      if (c.max_coordinate() >= s.n) throw ValidationError(line, "frame field references unknown coordinate");
    }
  }
  if (static_cast<int>(s.metric.size()) != s.ell) throw ValidationError(line, "metric must have hdim rows");
  for (int i = 0; i < s.ell; ++i) {
    if (static_cast<int>(s.metric[i].size()) != s.ell) throw ValidationError(line, "metric is not square");
  }
  for (int i = 0; i < s.ell; ++i) {
    for (int j = i + 1; j < s.ell; ++j) {
      if (!equivalent(s.metric[i][j], s.metric[j][i])) {
        throw ValidationError(line, "metric is not symmetric at entry (" + std::to_string(i + 1) + "," +
                                        std::to_string(j + 1) + ")");
      }
    }
  }
  if (s.oneform && static_cast<int>(s.oneform->size()) != s.ell) {
    throw ValidationError(line, "oneform must have hdim components");
  }
  if (!s.box.empty() && static_cast<int>(s.box.size()) != s.n) {
    throw ValidationError(line, "box must give one range per coordinate");
  }
  for (const auto& r : s.box) {
    if (!(r.lo < r.hi)) throw ValidationError(line, "empty sampling range");
  }
}

inline VectorField to_field(const VectorFieldSpec& v) { return vector_field(v.components); }

/// [X, Y]^k = X(Y^k) - Y(X^k). Jets of the result are available one order
/// below the inputs.
inline VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  if (x.size() != y.size()) throw DimensionMismatch("lie_bracket: component counts differ");
  const int n = static_cast<int>(x.size());
  VectorField out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    const ScalarField a = directional_derivative(y[k], x);
    const ScalarField b = directional_derivative(x[k], y);
    const int order = std::min(a.max_order(), b.max_order());
    out.emplace_back(n, order, [a, b](std::span<const double> p, int ord) {
      return a.evaluate(p, ord) - b.evaluate(p, ord);
    });
  }
  return out;
}

inline VectorField lie_bracket(const VectorFieldSpec& x, const VectorFieldSpec& y) {
  return lie_bracket(to_field(x), to_field(y));
}

/// Pointwise frame data in double precision.
struct FrameSnapshot {
  std::vector<double> point;
  Matrix frame;      ///< n x n, column a = e_a(point)
  Matrix frame_inv;
  Matrix gram;       ///< g_ij
  Matrix gram_inv;   ///< g^ij
  Tensor3 omega;     ///< [e_i,e_j]_0 = omega(i,j,k) e_k
  Tensor3 mcoef;     ///< [e_i,e_j]_1 = mcoef(i,j,a) e_{ell+a}
  Tensor3 lambda;    ///< [e_{ell+a}, e_k]_0 = lambda(a,k,h) e_h
  double frame_condition = 1.0;
};

/// Frame data carried as jets of a fixed order, for quantities whose frame
/// derivatives enter the curvature. Derived quantities (structure
/// constants, inverse Gram, e_i(g_jk)) are jets of `order`; the frame and
/// Gram entries themselves are one order higher.
struct FrameJets {
  int order = 0;
  int n = 0;
  int ell = 0;
  std::vector<double> point;
  JetMatrix frame;      ///< order + 1
  JetMatrix frame_inv;  ///< order
  JetMatrix gram;       ///< order + 1
  JetMatrix gram_inv;   ///< order
  Tensor<Jet, 3> dgram; ///< dgram(i,j,k) = e_i(g_jk), order
  Tensor<Jet, 3> omega; ///< order
  Tensor<Jet, 3> mcoef; ///< order
  Tensor3 lambda;       ///< values
  double frame_condition = 1.0;

  /// Components of frame vector a as jets of `ord` (<= order + 1).
  std::vector<Jet> column(int a, int ord) const {
    std::vector<Jet> c;
    c.reserve(n);
    for (int m = 0; m < n; ++m) c.push_back(frame(m, a).truncated(ord));
    return c;
  }

  /// e_a(f) as a jet of `order`, for f given at order + 1.
  Jet frame_derivative(int a, const Jet& f) const { return derive(f, column(a, order), order); }
};

namespace detail {

inline void check_point(const ManifoldSpec& s, std::span<const double> point) {
  if (static_cast<int>(point.size()) != s.n) {
    throw DimensionMismatch("point has " + std::to_string(point.size()) + " entries, manifold dimension is " +
                            std::to_string(s.n));
  }
}

/// Coefficients of v (jets of `order`) in the full frame.
inline std::vector<Jet> frame_coefficients(const JetMatrix& frame_inv, std::span<const Jet> v) {
  const int n = frame_inv.extent(0);
  std::vector<Jet> c;
  c.reserve(n);
  for (int a = 0; a < n; ++a) {
    Jet s = frame_inv(a, 0) * v[0];
    for (int k = 1; k < n; ++k) s += frame_inv(a, k) * v[k];
    c.push_back(std::move(s));
  }
  return c;
}

/// Coordinate components of [e_a, e_b] as jets of `order`.
inline std::vector<Jet> bracket(const FrameJets& f, int a, int b, int order) {
  const auto ea = f.column(a, order);
  const auto eb = f.column(b, order);
  std::vector<Jet> out;
  out.reserve(f.n);
  for (int k = 0; k < f.n; ++k) {
    const Jet fb = f.frame(k, b).truncated(order + 1);
    const Jet fa = f.frame(k, a).truncated(order + 1);
    out.push_back(derive(fb, ea, order) - derive(fa, eb, order));
  }
  return out;
}

}  // namespace detail

/// Evaluates the frame, metric and structure constants at `point` as jets
/// of `order` (0 or 1). Throws OrderExhausted for order >= 2, SingularFrame
/// and MetricNotSPD when the pointwise invariants fail.
inline FrameJets frame_jets(const ManifoldSpec& s, std::span<const double> point, int order) {
  detail::check_point(s, point);
  if (order + 1 > kMaxJetOrder) {
    throw OrderExhausted("frame data of order " + std::to_string(order) + " needs order-" +
                         std::to_string(order + 1) + " expression jets");
  }
  const int n = s.n, ell = s.ell, up = order + 1;
  FrameJets f;
  f.order = order;
  f.n = n;
  f.ell = ell;
  f.point.assign(point.begin(), point.end());

  f.frame = JetMatrix({n, n});
  for (int a = 0; a < n; ++a) {
    const auto& comps = s.frame(a).components;
    for (int m = 0; m < n; ++m) f.frame(m, a) = jet_eval(comps[m], point, up);
  }
  const Eigen::MatrixXd e = to_eigen(values(f.frame));
  require_nonsingular(e);
  f.frame_condition = condition_number(e);

  JetMatrix low({n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) low(i, j) = f.frame(i, j).truncated(order);
  f.frame_inv = jet_inverse(low);

  f.gram = JetMatrix({ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j) f.gram(i, j) = jet_eval(s.metric[i][j], point, up);
  require_spd(to_eigen(values(f.gram)));
  JetMatrix glow({ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j) glow(i, j) = f.gram(i, j).truncated(order);
  f.gram_inv = jet_inverse(glow);

  f.dgram = Tensor<Jet, 3>({ell, ell, ell});
  for (int i = 0; i < ell; ++i) {
    const auto ei = f.column(i, order);
    for (int j = 0; j < ell; ++j)
      for (int k = j; k < ell; ++k) {
        f.dgram(i, j, k) = derive(f.gram(j, k), ei, order);
        f.dgram(i, k, j) = f.dgram(i, j, k);
      }
  }

  const Jet zero = Jet::constant(0.0, n, order);
  f.omega = Tensor<Jet, 3>({ell, ell, ell}, zero);
  f.mcoef = Tensor<Jet, 3>({ell, ell, n - ell}, zero);
  for (int i = 0; i < ell; ++i) {
    for (int j = i + 1; j < ell; ++j) {
      const auto c = detail::frame_coefficients(f.frame_inv, detail::bracket(f, i, j, order));
      for (int k = 0; k < ell; ++k) {
        f.omega(i, j, k) = c[k];
        f.omega(j, i, k) = -c[k];
      }
      for (int a = 0; a < n - ell; ++a) {
        f.mcoef(i, j, a) = c[ell + a];
        f.mcoef(j, i, a) = -c[ell + a];
      }
    }
  }

  // Lambda only ever enters undifferentiated.
  JetMatrix inv0({n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv0(i, j) = f.frame_inv(i, j).truncated(0);
  f.lambda = Tensor3({n - ell, ell, ell});
  for (int a = 0; a < n - ell; ++a) {
    for (int k = 0; k < ell; ++k) {
      const auto c = detail::frame_coefficients(inv0, detail::bracket(f, ell + a, k, 0));
      for (int h = 0; h < ell; ++h) f.lambda(a, k, h) = c[h].value();
    }
  }
  return f;
}

template <int R>
Tensor<double, R> values(const Tensor<Jet, R>& t) {
  Tensor<double, R> v(t.extents());
  for (std::size_t i = 0; i < t.size(); ++i) v.data()[i] = t.data()[i].value();
  return v;
}

inline FrameSnapshot to_snapshot(const FrameJets& f) {
  FrameSnapshot s;
  s.point = f.point;
  s.frame = values(f.frame);
  s.frame_inv = values(f.frame_inv);
  s.gram = values(f.gram);
  s.gram_inv = values(f.gram_inv);
  s.omega = values(f.omega);
  s.mcoef = values(f.mcoef);
  s.lambda = f.lambda;
  s.frame_condition = f.frame_condition;
  return s;
}

inline FrameSnapshot snapshot(const ManifoldSpec& s, std::span<const double> point) {
  return to_snapshot(frame_jets(s, point, 0));
}

/// Horizontal coefficients of v: the first ell entries of its expansion in
/// the full frame (projection along V1, not metric-orthogonal).
inline std::vector<double> project_h(const ManifoldSpec& s, std::span<const double> point,
                                     std::span<const double> v) {
  detail::check_point(s, point);
  if (static_cast<int>(v.size()) != s.n) throw DimensionMismatch("project_h: vector length differs from dim");
  Eigen::MatrixXd e(s.n, s.n);
  for (int a = 0; a < s.n; ++a)
    for (int m = 0; m < s.n; ++m) e(m, a) = eval_value(s.frame(a).components[m], point);
  require_nonsingular(e);
  const Eigen::VectorXd c = e.partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(v.data(), s.n));
  return std::vector<double>(c.data(), c.data() + s.ell);
}

}  // namespace srclab
