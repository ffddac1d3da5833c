#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "srclab/connection.hpp"
#include "srclab/curvature.hpp"
#include "srclab/errors.hpp"
#include "srclab/linalg.hpp"
#include "srclab/manifold.hpp"

namespace srclab {

struct CheckSpec {
  std::string id;
  std::string description;
  std::string paper_ref;  ///< the identity, written out
  int required_rank = 2;
  bool needs_pi = false;
  double tolerance = 1e-9;
};

struct CheckRecord {
  std::string id;
  std::string description;
  std::string paper_ref;
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;
  double tolerance = 1e-9;
  int points_evaluated = 0;
  bool pass = false;
  std::optional<std::string> skipped_reason;
  std::vector<std::string> errors;
};

struct SuiteConfig {
  int points = 20;
  std::uint64_t seed = 1;
  double tol = 1e-9;
};

struct Report {
  std::string manifold;
  std::uint64_t seed = 0;
  int points = 0;
  int jet_order = kMaxJetOrder;
  std::vector<CheckRecord> checks;
  std::vector<std::string> warnings;

  const CheckRecord& check(const std::string& id) const {
    for (const auto& c : checks) {
      if (c.id == id) return c;
    }
    throw UnknownEntry("no check " + id);
  }

  /// True iff every check that ran passed.
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.skipped_reason || c.pass; });
  }
};

inline const std::vector<CheckSpec>& check_table() {
  static const std::vector<CheckSpec> table = {
      {"C01", "nabla and D are metric", "Z g(X,Y) = g(nabla_Z X, Y) + g(X, nabla_Z Y)", 2, false, 1e-9},
      {"C02", "nabla is torsion-free", "nabla_X Y - nabla_Y X - [X,Y]_0 = 0", 2, false, 1e-9},
      {"C03", "torsion of D is pi(Y)X - pi(X)Y", "T(X,Y) = pi(Y)X - pi(X)Y", 2, true, 1e-9},
      {"C04", "curvature antisymmetries",
       "K(X,Y)Z = -K(Y,X)Z; g(K(X,Y)Z,W) = -g(K(X,Y)W,Z) when [X,Y]_1 = 0", 2, true, 1e-9},
      {"C05", "first Bianchi identity of nabla", "K^h_ijk + K^h_jki + K^h_kij = 0, lowered likewise", 2, false, 1e-9},
      {"C06", "Ricci-type contraction identity", "K^e_kie = K^e_kei - K^e_iek", 2, false, 1e-9},
      {"C07", "curvature of D against nabla", "R^h_ijk = K^h_ijk + d_j^h pi_ik - d_i^h pi_jk + pi_j^h g_ik - pi_i^h g_jk",
       2, true, 1e-9},
      {"C08", "Ricci and scalar curvature of D", "R_ik = K_ik + (l-2) pi_ik + alpha g_ik; R = K + 2(l-1) alpha", 2, true,
       1e-9},
      {"C09", "S tensor is unchanged by nabla -> D", "Sbar^h_ijk = S^h_ijk", 3, true, 1e-9},
      {"C10", "conformal tensor difference formula",
       "Cbar - C = -(1/l)(d_j^h pi_ik - d_i^h pi_jk + g_ik pi_j^h - g_jk pi_i^h) - 2 alpha/(l(l-2))(d_j^h g_ik - d_i^h "
       "g_jk) - ((l-2)/l) d_k^h pi_ij - (alpha/l) d_k^h g_ij",
       3, true, 1e-9},
      {"C11", "projective tensor difference formula",
       "Wbar - W = (1/(l-1))(d_j^h pi_ik - d_i^h pi_jk) + (g_ik pi_j^h - g_jk pi_i^h) - (alpha/(l-1))(d_j^h g_ik - "
       "d_i^h g_jk)",
       2, true, 1e-9},
      {"C12", "alpha = 0 gives equal conformal tensors", "alpha = 0 => Cbar = C", 3, true, 1e-9},
      {"C13", "characteristic tensor proportional to g gives equal projective tensors", "pi_ik = lambda g_ik => Wbar = W",
       2, true, 1e-9},
      {"C14", "equal curvatures force alpha = 0", "R = K => alpha = 0", 2, true, 1e-9},
      {"C15", "flat D forces S = 0 and the flat characteristic tensor",
       "R = 0 => S = 0 and pi_ik = 1/(2-l)(K_ik - K g_ik/(2(l-1)))", 3, true, 1e-9},
      {"C16", "covariant derivative of the torsion of D",
       "(D_i T)_jk^h = D_i pi_k d_j^h - D_i pi_j d_k^h; pi_ij = D_i pi_j - 1/2 g_ij |pi|^2", 2, true, 1e-9},
      {"C17", "group manifold with respect to D",
       "R = 0 and D T = 0 => pi_ij = -1/2 g_ij |pi|^2, K^h_ijk = |pi|^2 (d_j^h g_ik - d_i^h g_jk), W = 0", 2, true, 1e-9},
      {"C18", "constant metric with constant horizontal brackets is a group manifold",
       "e(g) = 0, e(Omega) = 0, Lambda = 0 => K = 0 and nabla T = 0", 2, false, 1e-9},
  };
  return table;
}

/// Uniform samples in the manifold's coordinate box. Prefixes of a longer run
/// coincide with shorter runs under the same seed.
inline std::vector<std::vector<double>> sample_points(const ManifoldSpec& spec, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> pts;
  pts.reserve(count);
  for (int p = 0; p < count; ++p) {
    std::vector<double> x(spec.n);
    for (int m = 0; m < spec.n; ++m) {
      const CoordinateRange r = spec.box.empty() ? CoordinateRange{} : spec.box[m];
      std::uniform_real_distribution<double> u(r.lo, r.hi);
      x[m] = u(rng);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

/// One-form whose characteristic tensor at `point` equals `target`.
///
/// pi_k(x) = v_k + B_km (x_m - p_m) with B chosen so that
/// e_i(pi_k)(p) = target_ik + {ik,m} v_m + v_i v_k - 1/2 g_ik |v|^2.
inline OneFormData tuned_oneform(const ConnectionJets& nabla, std::span<const double> v, const Matrix& target) {
  const FrameJets& f = nabla.frame;
  const int n = f.n, ell = f.ell;
  if (static_cast<int>(v.size()) != ell || target.extent(0) != ell || target.extent(1) != ell) {
    throw DimensionMismatch("tuned one-form needs l values and an l x l target");
  }
  const Matrix g = values(f.gram);
  const Matrix ginv = values(f.gram_inv);
  double norm2 = 0.0;
  for (int a = 0; a < ell; ++a)
    for (int b = 0; b < ell; ++b) norm2 += ginv(a, b) * v[a] * v[b];
  Eigen::MatrixXd d(ell, ell);
  for (int i = 0; i < ell; ++i)
    for (int k = 0; k < ell; ++k) {
      double s = target(i, k) + v[i] * v[k] - 0.5 * g(i, k) * norm2;
      for (int m = 0; m < ell; ++m) s += nabla.coeff(i, k, m).value() * v[m];
      d(i, k) = s;
    }
  Eigen::MatrixXd eh(n, ell);
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < ell; ++a) eh(m, a) = f.frame(m, a).value();
  const Eigen::MatrixXd gram_h = eh.transpose() * eh;
  const Eigen::MatrixXd b = d.transpose() * gram_h.ldlt().solve(eh.transpose());

  OneFormData pi;
  for (int k = 0; k < ell; ++k) {
    Expression e = Expression::constant(v[k]);
    for (int m = 0; m < n; ++m) {
      if (b(k, m) == 0.0) continue;
      e = e + Expression::constant(b(k, m)) * (Expression::coordinate(m) - Expression::constant(f.point[m]));
    }
    pi.components.push_back(e);
  }
  return pi;
}

namespace detail {

inline double max_of(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, x);
  return m;
}

template <class T>
double max_abs_jets(const T& t) {
  double m = 0.0;
  for (const auto& j : t.data()) m = std::max(m, std::abs(j.value()));
  return m;
}

inline double max_abs_vec(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

template <class T>
T difference(const T& a, const T& b) {
  T d = a;
  for (std::size_t i = 0; i < d.size(); ++i) d.data()[i] -= b.data()[i];
  return d;
}

/// abs residual and the operand scale it is measured against.
struct Residual {
  double abs = 0.0;
  double scale = 0.0;
  void merge(const Residual& o) {
    abs = std::max(abs, o.abs);
    scale = std::max(scale, o.scale);
  }
  double rel() const { return abs / std::max(1.0, scale); }
};

inline bool near_zero(double x, double scale, double tol) { return x <= tol * std::max(1.0, scale); }

/// Per-point quantities, computed on first use.
class PointContext {
 public:
  PointContext(std::shared_ptr<const ManifoldSpec> spec, const OneFormData& pi, std::vector<double> point, double tol)
      : spec_(std::move(spec)), pi_(pi), point_(std::move(point)), tol_(tol) {}

  const ManifoldSpec& spec() const { return *spec_; }
  const std::vector<double>& point() const { return point_; }
  int ell() const { return spec_->ell; }
  double tol() const { return tol_; }

  const ConnectionJets& nabla() const {
    if (!nabla_) nabla_ = ConnectionField(ConnectionKind::kSubRiemannian, spec_, std::nullopt).evaluate(point_, 1);
    return *nabla_;
  }
  const ConnectionJets& semi() const {
    if (!semi_) semi_ = ConnectionField(ConnectionKind::kSemiSubRiemannian, spec_, pi_).evaluate(point_, 1);
    return *semi_;
  }
  const CurvatureBundle& K() const {
    if (!k_) k_ = schouten_curvature(nabla());
    return *k_;
  }
  const CurvatureBundle& R() const {
    if (!r_) r_ = schouten_curvature(semi());
    return *r_;
  }
  const CharacteristicTensor& chi() const {
    if (!chi_) chi_ = characteristic_tensor(nabla(), *semi().pi);
    return *chi_;
  }
  std::vector<double> pi_values() const {
    std::vector<double> v;
    for (const auto& j : semi().pi->lower) v.push_back(j.value());
    return v;
  }
  double pi_norm2() const {
    const auto v = pi_values();
    const Matrix& ginv = K().gram_inv;
    double s = 0.0;
    for (int a = 0; a < ell(); ++a)
      for (int b = 0; b < ell(); ++b) s += ginv(a, b) * v[a] * v[b];
    return s;
  }

  /// A fresh context at the same point whose one-form is tuned so that its
  /// characteristic tensor equals `target` there.
  PointContext tuned(const Matrix& target) const {
    std::vector<double> v(ell());
    for (int i = 0; i < ell(); ++i) v[i] = 0.4 - 0.3 * i;
    PointContext t(spec_, tuned_oneform(nabla(), v, target), point_, tol_);
    t.nabla_ = nabla_;
    t.k_ = k_;
    return t;
  }

 private:
  std::shared_ptr<const ManifoldSpec> spec_;
  OneFormData pi_;
  std::vector<double> point_;
  double tol_;
  mutable std::optional<ConnectionJets> nabla_, semi_;
  mutable std::optional<CurvatureBundle> k_, r_;
  mutable std::optional<CharacteristicTensor> chi_;
};

using CheckFn = std::function<Residual(const PointContext&)>;

template <int R>
Residual tensor_residual(const Tensor<double, R>& diff, std::initializer_list<double> operand_norms) {
  return {max_abs(diff), max_of(operand_norms)};
}

inline Residual check_metricity(const PointContext& c) {
  Residual r;
  for (const ConnectionJets* cj : {&c.nabla(), &c.semi()}) {
    const Tensor3 coeff = values(cj->coeff);
    const Tensor3 m = metricity_residual(cj->frame, coeff);
    r.merge(tensor_residual(m, {max_abs_jets(cj->frame.dgram), max_abs(coeff), max_abs_jets(cj->frame.gram)}));
  }
  return r;
}

inline Residual check_torsion_free(const PointContext& c) {
  const Tensor3 coeff = values(c.nabla().coeff);
  const Tensor3 t = torsion_from_values(c.nabla().frame, coeff);
  return tensor_residual(t, {max_abs(coeff), max_abs_jets(c.nabla().frame.omega)});
}

inline Residual check_semi_torsion(const PointContext& c) {
  const int ell = c.ell();
  const Tensor3 coeff = values(c.semi().coeff);
  const Tensor3 t = torsion_from_values(c.semi().frame, coeff);
  const auto pi = c.pi_values();
  Tensor3 d = t;
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j)
      for (int k = 0; k < ell; ++k) d(i, j, k) -= delta(i, k) * pi[j] - delta(j, k) * pi[i];
  return tensor_residual(d, {max_abs(coeff), max_abs_vec(pi)});
}

inline Residual check_antisymmetry(const PointContext& c) {
  const int ell = c.ell();
  Residual r;
  const double mnorm = max_abs_jets(c.nabla().frame.mcoef);
  for (const ConnectionJets* cj : {&c.nabla(), &c.semi()}) {
    const Tensor4 full = schouten_tensor(*cj, false);
    Tensor4 d = full;
    for (int i = 0; i < ell; ++i)
      for (int j = 0; j < ell; ++j)
        for (int k = 0; k < ell; ++k)
          for (int h = 0; h < ell; ++h) d(i, j, k, h) = full(i, j, k, h) + full(j, i, k, h);
    r.merge(tensor_residual(d, {max_abs(full)}));
    if (mnorm <= 1e-12) {
      const CurvatureBundle b = schouten_curvature(*cj);
      Tensor4 e = b.lowered;
      for (int i = 0; i < ell; ++i)
        for (int j = 0; j < ell; ++j)
          for (int k = 0; k < ell; ++k)
            for (int h = 0; h < ell; ++h) e(i, j, k, h) = b.lowered(i, j, k, h) + b.lowered(i, j, h, k);
      r.merge(tensor_residual(e, {max_abs(b.lowered)}));
    }
  }
  return r;
}

inline Residual check_bianchi(const PointContext& c) {
  const int ell = c.ell();
  const CurvatureBundle& b = c.K();
  Tensor4 d({ell, ell, ell, ell});
  Tensor4 e({ell, ell, ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j)
      for (int k = 0; k < ell; ++k)
        for (int h = 0; h < ell; ++h) {
          d(i, j, k, h) = b.curv(i, j, k, h) + b.curv(j, k, i, h) + b.curv(k, i, j, h);
          e(i, j, k, h) = b.lowered(i, j, k, h) + b.lowered(j, k, i, h) + b.lowered(k, i, j, h);
        }
  Residual r = tensor_residual(d, {max_abs(b.curv)});
  r.merge(tensor_residual(e, {max_abs(b.lowered)}));
  return r;
}

inline Residual check_contraction(const PointContext& c) {
  const int ell = c.ell();
  const CurvatureBundle& b = c.K();
  const Matrix ric2 = second_trace(b.curv);
  Matrix d({ell, ell}), e({ell, ell});
  for (int k = 0; k < ell; ++k)
    for (int i = 0; i < ell; ++i) {
      d(k, i) = ric2(k, i) - b.ricci(k, i) + b.ricci(i, k);
      e(k, i) = ric2(k, i) + ric2(i, k);
    }
  Residual r = tensor_residual(d, {max_abs(ric2), max_abs(b.ricci)});
  r.merge(tensor_residual(e, {max_abs(ric2)}));
  return r;
}

inline Residual check_curvature_relation(const PointContext& c) {
  const Tensor4 p = curvature_shift(c.chi(), c.K().gram);
  const Tensor4 d = difference(difference(c.R().curv, c.K().curv), p);
  return tensor_residual(d, {max_abs(c.R().curv), max_abs(c.K().curv), max_abs(p)});
}

inline Residual check_ricci_relation(const PointContext& c) {
  const int ell = c.ell();
  const Matrix shift = ricci_shift(c.chi(), c.K().gram);
  const Matrix d = difference(difference(c.R().ricci, c.K().ricci), shift);
  Residual r = tensor_residual(d, {max_abs(c.R().ricci), max_abs(c.K().ricci), max_abs(shift)});
  const double sshift = 2.0 * (ell - 1) * c.chi().alpha;
  r.merge({std::abs(c.R().scalar - c.K().scalar - sshift),
           max_of({std::abs(c.R().scalar), std::abs(c.K().scalar), std::abs(sshift)})});
  return r;
}

inline Residual check_s_invariance(const PointContext& c) {
  const Tensor4 sb = s_tensor(c.R()), s = s_tensor(c.K());
  return tensor_residual(difference(sb, s), {max_abs(sb), max_abs(s)});
}

inline Residual check_conformal_formula(const PointContext& c) {
  const Tensor4 cb = conformal_tensor(c.R()), ck = conformal_tensor(c.K());
  const Tensor4 shift = conformal_shift(c.chi(), c.K().gram);
  return tensor_residual(difference(difference(cb, ck), shift), {max_abs(cb), max_abs(ck), max_abs(shift)});
}

inline Residual check_projective_formula(const PointContext& c) {
  const Tensor4 wb = projective_tensor(c.R()), w = projective_tensor(c.K());
  const Tensor4 shift = projective_shift(c.chi(), c.K().gram);
  return tensor_residual(difference(difference(wb, w), shift), {max_abs(wb), max_abs(w), max_abs(shift)});
}

/// How far the tuned one-form misses its target characteristic tensor.
inline Residual construction_residual(const PointContext& t, const Matrix& target) {
  return tensor_residual(difference(t.chi().pi_lower, target), {max_abs(t.chi().pi_lower), max_abs(target)});
}

inline Matrix traceless_target(const Matrix& g, const Matrix& ginv) {
  const int ell = g.extent(0);
  Matrix a({ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int k = 0; k < ell; ++k) a(i, k) = 0.5 * (i + 1) * delta(i, k) + 0.2 * (i - k) + 0.1;
  const double tr = trace_with(a, ginv) / ell;
  for (int i = 0; i < ell; ++i)
    for (int k = 0; k < ell; ++k) a(i, k) -= tr * g(i, k);
  return a;
}

inline Residual check_conformal_equality(const PointContext& c) {
  const Matrix target = traceless_target(c.K().gram, c.K().gram_inv);
  const PointContext t = c.tuned(target);
  Residual r = construction_residual(t, target);
  r.merge({std::abs(t.chi().alpha), 0.0});
  const Tensor4 cb = conformal_tensor(t.R()), ck = conformal_tensor(t.K());
  r.merge(tensor_residual(difference(cb, ck), {max_abs(cb), max_abs(ck)}));
  return r;
}

inline Residual check_projective_equality(const PointContext& c) {
  constexpr double lambda = 0.37;
  Matrix target = c.K().gram;
  for (auto& x : target.data()) x *= lambda;
  const PointContext t = c.tuned(target);
  Residual r = construction_residual(t, target);
  const Tensor4 wb = projective_tensor(t.R()), w = projective_tensor(t.K());
  r.merge(tensor_residual(difference(wb, w), {max_abs(wb), max_abs(w)}));
  return r;
}

/// R = K => alpha = 0, tested on the given one-form and on one tuned to
/// have vanishing characteristic tensor.
inline Residual check_equal_curvature(const PointContext& c) {
  const int ell = c.ell();
  Residual r;
  auto implication = [&](const PointContext& x) {
    const Tensor4 d = difference(x.R().curv, x.K().curv);
    const double scale = max_of({max_abs(x.R().curv), max_abs(x.K().curv)});
    if (near_zero(max_abs(d), scale, x.tol())) r.merge({std::abs(x.chi().alpha), 0.0});
  };
  implication(c);
  const Matrix zero({ell, ell});
  const PointContext t = c.tuned(zero);
  r.merge(construction_residual(t, zero));
  implication(t);
  return r;
}

struct FlatnessFlags {
  bool r_zero = false;
  bool s_zero = false;
  bool pi_matches = false;
  double s_norm = 0.0;
  double pi_gap = 0.0;
  double scale = 0.0;
};

inline FlatnessFlags flatness_flags(const PointContext& c) {
  FlatnessFlags f;
  const Tensor4 p = curvature_shift(c.chi(), c.K().gram);
  const double rn = max_abs(c.R().curv);
  const Tensor4 s = s_tensor(c.R());
  const Matrix flat = flat_characteristic(c.K());
  f.s_norm = max_abs(s);
  f.pi_gap = max_abs(difference(c.chi().pi_lower, flat));
  f.scale = max_of({max_abs(c.K().curv), max_abs(p), max_abs(flat), max_abs(c.chi().pi_lower)});
  f.r_zero = near_zero(rn, f.scale, c.tol());
  f.s_zero = near_zero(f.s_norm, f.scale, c.tol());
  f.pi_matches = near_zero(f.pi_gap, f.scale, c.tol());
  return f;
}

inline Residual check_flatness(const PointContext& c) {
  const FlatnessFlags f = flatness_flags(c);
  if (!f.r_zero) return {};
  return {std::max(f.s_norm, f.pi_gap), f.scale};
}

inline Residual check_torsion_derivative(const PointContext& c) {
  const int ell = c.ell();
  const Tensor4 dt = covariant_derivative_torsion(c.semi());
  const Matrix dpi = covariant_oneform(c.semi(), *c.semi().pi);
  Tensor4 d = dt;
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j)
      for (int k = 0; k < ell; ++k)
        for (int h = 0; h < ell; ++h) d(i, j, k, h) -= dpi(i, k) * delta(j, h) - dpi(i, j) * delta(k, h);
  Residual r = tensor_residual(d, {max_abs(dt), max_abs(dpi)});
  const double n2 = c.pi_norm2();
  const Matrix& g = c.K().gram;
  Matrix e = c.chi().pi_lower;
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j) e(i, j) += 0.5 * g(i, j) * n2 - dpi(i, j);
  r.merge(tensor_residual(e, {max_abs(c.chi().pi_lower), max_abs(dpi), n2 * max_abs(g)}));
  return r;
}

inline Residual check_semi_group_manifold(const PointContext& c) {
  const int ell = c.ell();
  const Tensor4 dt = covariant_derivative_torsion(c.semi());
  const double scale = max_of({max_abs(c.K().curv), max_abs(curvature_shift(c.chi(), c.K().gram))});
  if (!near_zero(max_abs(c.R().curv), scale, c.tol()) || !near_zero(max_abs(dt), scale, c.tol())) return {};
  const double n2 = c.pi_norm2();
  const Matrix& g = c.K().gram;
  Matrix e = c.chi().pi_lower;
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j) e(i, j) += 0.5 * g(i, j) * n2;
  Tensor4 k = c.K().curv;
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j)
      for (int kk = 0; kk < ell; ++kk)
        for (int h = 0; h < ell; ++h) k(i, j, kk, h) -= n2 * (delta(j, h) * g(i, kk) - delta(i, h) * g(j, kk));
  const Tensor4 w = projective_tensor(c.K());
  Residual r = tensor_residual(e, {max_abs(c.chi().pi_lower), n2 * max_abs(g)});
  r.merge(tensor_residual(k, {max_abs(c.K().curv), n2 * max_abs(g)}));
  r.merge(tensor_residual(w, {max_abs(c.K().curv)}));
  return r;
}

/// Pointwise version of the Carnot hypothesis: frame metric and horizontal
/// structure constants stationary, no horizontal part in [V1, V0].
inline bool carnot_like(const PointContext& c) {
  const FrameJets& f = c.nabla().frame;
  const double eps = 1e-12;
  for (const auto& j : f.gram.data()) {
    for (int a = 0; a < f.n; ++a) {
      if (std::abs(j.grad(a)) > eps) return false;
      for (int b = 0; b < f.n; ++b)
        if (std::abs(j.hess(a, b)) > eps) return false;
    }
  }
  for (const auto& j : f.omega.data())
    for (int a = 0; a < f.n; ++a)
      if (std::abs(j.grad(a)) > eps) return false;
  if (max_abs(f.lambda) > eps) return false;
  return true;
}

inline Residual check_carnot(const PointContext& c) {
  if (!carnot_like(c)) return {};
  const Tensor4 nt = covariant_derivative_torsion(c.nabla());
  Residual r = tensor_residual(c.K().curv, {});
  r.merge(tensor_residual(nt, {}));
  return r;
}

inline const std::vector<CheckFn>& check_functions() {
  static const std::vector<CheckFn> fns = {
      check_metricity,          check_torsion_free,       check_semi_torsion,       check_antisymmetry,
      check_bianchi,            check_contraction,        check_curvature_relation, check_ricci_relation,
      check_s_invariance,       check_conformal_formula,  check_projective_formula, check_conformal_equality,
      check_projective_equality, check_equal_curvature,   check_flatness,           check_torsion_derivative,
      check_semi_group_manifold, check_carnot,
  };
  return fns;
}

inline OneFormData resolve_oneform(const ManifoldSpec& spec, const std::optional<OneFormData>& pi) {
  if (pi) {
    if (static_cast<int>(pi->components.size()) != spec.ell) {
      throw DimensionMismatch("one-form needs " + std::to_string(spec.ell) + " components");
    }
    return *pi;
  }
  if (spec.oneform) return OneFormData{*spec.oneform};
  return OneFormData::zero(spec.ell);
}

}  // namespace detail

/// Runs every check of the table at `config.points` seeded samples.
/// Without a one-form the manifold's own is used, else pi = 0.
inline Report run_suite(const ManifoldSpec& spec, const std::optional<OneFormData>& pi, const SuiteConfig& config) {
  validate(spec);
  if (config.points < 1) throw DomainError("need at least one sample point");
  if (!(config.tol > 0.0)) throw DomainError("tolerance must be positive");
  const auto shared = std::make_shared<const ManifoldSpec>(spec);
  const OneFormData form = detail::resolve_oneform(spec, pi);

  Report rep;
  rep.manifold = spec.name;
  rep.seed = config.seed;
  rep.points = config.points;

  const auto& table = check_table();
  const auto& fns = detail::check_functions();
  std::vector<detail::Residual> worst(table.size());
  rep.checks.resize(table.size());
  for (std::size_t c = 0; c < table.size(); ++c) {
    CheckRecord& r = rep.checks[c];
    r.id = table[c].id;
    r.description = table[c].description;
    r.paper_ref = table[c].paper_ref;
    r.tolerance = config.tol;
    if (spec.ell < table[c].required_rank) {
      r.skipped_reason = "RankTooSmall: needs horizontal rank >= " + std::to_string(table[c].required_rank) +
                         ", have " + std::to_string(spec.ell);
    }
  }

  double worst_condition = 0.0;
  const auto pts = sample_points(spec, config.points, config.seed);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const detail::PointContext ctx(shared, form, pts[p], config.tol);
    try {
      worst_condition = std::max(worst_condition, ctx.nabla().frame.frame_condition);
    } catch (const std::exception&) {
      // reported by the checks themselves
    }
    for (std::size_t c = 0; c < table.size(); ++c) {
      CheckRecord& r = rep.checks[c];
      if (r.skipped_reason) continue;
      try {
        const detail::Residual res = fns[c](ctx);
        worst[c].merge(res);
        r.max_rel_residual = std::max(r.max_rel_residual, res.rel());
        ++r.points_evaluated;
      } catch (const std::exception& e) {
        r.errors.push_back("point " + std::to_string(p) + ": " + e.what());
      }
    }
  }

  for (std::size_t c = 0; c < table.size(); ++c) {
    CheckRecord& r = rep.checks[c];
    if (r.skipped_reason) {
      r.max_abs_residual = r.max_rel_residual = std::numeric_limits<double>::quiet_NaN();
      r.pass = false;
      continue;
    }
    r.max_abs_residual = worst[c].abs;
    if (!r.errors.empty()) {
      r.max_abs_residual = r.max_rel_residual = std::numeric_limits<double>::quiet_NaN();
      for (const auto& e : r.errors) rep.warnings.push_back(r.id + " " + e);
    }
    r.pass = r.max_rel_residual <= r.tolerance;
  }
  if (worst_condition > 1e8) {
    rep.warnings.push_back("frame condition number reaches " + std::to_string(worst_condition));
  }
  return rep;
}

enum class GroupVerdict { kHoldsAtSamples, kFails, kInconclusive };

inline const char* to_string(GroupVerdict v) {
  switch (v) {
    case GroupVerdict::kHoldsAtSamples: return "holds at samples";
    case GroupVerdict::kFails: return "fails";
    case GroupVerdict::kInconclusive: return "inconclusive";
  }
  return "?";
}

struct GroupManifoldResult {
  GroupVerdict verdict = GroupVerdict::kInconclusive;
  ConnectionKind connection = ConnectionKind::kSubRiemannian;
  double max_curvature = 0.0;
  double max_torsion_derivative = 0.0;
  std::vector<std::string> evidence;
};

/// Vanishing curvature and parallel torsion at the samples. Uses nabla
/// when no one-form is given, D otherwise. Values above the tolerance but
/// within a factor 1e3 of it are reported as inconclusive.
inline GroupManifoldResult check_group_manifold(const ManifoldSpec& spec, const std::optional<OneFormData>& pi,
                                                const SuiteConfig& config) {
  validate(spec);
  GroupManifoldResult out;
  out.connection = pi ? ConnectionKind::kSemiSubRiemannian : ConnectionKind::kSubRiemannian;
  const auto shared = std::make_shared<const ManifoldSpec>(spec);
  const OneFormData form = detail::resolve_oneform(spec, pi);
  bool fails = false, unsure = false;
  const auto pts = sample_points(spec, config.points, config.seed);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    try {
      const detail::PointContext ctx(shared, form, pts[p], config.tol);
      const ConnectionJets& cj = pi ? ctx.semi() : ctx.nabla();
      const CurvatureBundle& b = pi ? ctx.R() : ctx.K();
      const double kn = max_abs(b.curv);
      const double tn = max_abs(covariant_derivative_torsion(cj));
      const double c2 = max_abs(values(cj.coeff));
      const double scale = std::max(1.0, c2 * c2);
      out.max_curvature = std::max(out.max_curvature, kn);
      out.max_torsion_derivative = std::max(out.max_torsion_derivative, tn);
      const double worst = std::max(kn, tn) / scale;
      if (worst > 1e3 * config.tol) {
        fails = true;
        out.evidence.push_back("point " + std::to_string(p) + ": |curvature| = " + std::to_string(kn) +
                               ", |torsion derivative| = " + std::to_string(tn));
      } else if (worst > config.tol) {
        unsure = true;
      }
    } catch (const std::exception& e) {
      unsure = true;
      out.evidence.push_back("point " + std::to_string(p) + ": " + e.what());
    }
  }
  out.verdict = fails ? GroupVerdict::kFails : unsure ? GroupVerdict::kInconclusive : GroupVerdict::kHoldsAtSamples;
  return out;
}

struct FlatnessRecord {
  std::vector<double> point;
  bool r_zero = false;
  bool s_zero = false;
  bool pi_matches = false;
};

struct FlatnessResult {
  std::vector<FlatnessRecord> records;
  bool verdict = true;  ///< R = 0 implies S = 0 and the flat characteristic tensor
};

inline FlatnessResult check_flatness_criterion(const ManifoldSpec& spec, const std::optional<OneFormData>& pi,
                                               const SuiteConfig& config) {
  validate(spec);
  detail::require_rank(spec.ell, 3, "flatness criterion");
  const auto shared = std::make_shared<const ManifoldSpec>(spec);
  const OneFormData form = detail::resolve_oneform(spec, pi);
  FlatnessResult out;
  for (const auto& p : sample_points(spec, config.points, config.seed)) {
    const detail::PointContext ctx(shared, form, p, config.tol);
    const detail::FlatnessFlags f = detail::flatness_flags(ctx);
    out.records.push_back({p, f.r_zero, f.s_zero, f.pi_matches});
    if (f.r_zero && !(f.s_zero && f.pi_matches)) out.verdict = false;
  }
  return out;
}

}  // namespace srclab
