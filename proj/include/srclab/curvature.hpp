#pragma once

#include <span>
#include <string>

#include "srclab/connection.hpp"

namespace srclab {

/// Pointwise curvature of one connection.
///
/// Index order is fixed: curv(i,j,k,h) is the e_h-component of
/// K(e_i, e_j) e_k. Every contraction below is spelled out against that
/// order because the two Ricci-type traces genuinely differ here.
struct CurvatureBundle {
  ConnectionKind kind = ConnectionKind::kSubRiemannian;
  std::vector<double> point;
  Tensor4 curv;
  Matrix ricci;        ///< K^e_iek = sum_e curv(i,e,k,e)
  double scalar = 0.0; ///< g^ik K^e_iek
  Tensor4 lowered;     ///< g(K(e_i,e_j)e_k, e_h)
  Matrix gram;
  Matrix gram_inv;
};

/// sum_e curv(i,e,k,e).
inline Matrix first_trace(const Tensor4& curv) {
  const int ell = curv.extent(0);
  Matrix r({ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int k = 0; k < ell; ++k) {
      double s = 0.0;
      for (int e = 0; e < ell; ++e) s += curv(i, e, k, e);
      r(i, k) = s;
    }
  return r;
}

/// sum_e curv(i,k,e,e), the contraction K^e_ike.
inline Matrix second_trace(const Tensor4& curv) {
  const int ell = curv.extent(0);
  Matrix r({ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int k = 0; k < ell; ++k) {
      double s = 0.0;
      for (int e = 0; e < ell; ++e) s += curv(i, k, e, e);
      r(i, k) = s;
    }
  return r;
}

/// A(j,f) g^{fh}.
inline Matrix raise_second(const Matrix& a, const Matrix& ginv) {
  const int ell = a.extent(0);
  Matrix r({ell, ell});
  for (int j = 0; j < ell; ++j)
    for (int h = 0; h < ell; ++h) {
      double s = 0.0;
      for (int f = 0; f < ell; ++f) s += a(j, f) * ginv(f, h);
      r(j, h) = s;
    }
  return r;
}

inline double trace_with(const Matrix& a, const Matrix& ginv) {
  double s = 0.0;
  for (int i = 0; i < a.extent(0); ++i)
    for (int k = 0; k < a.extent(1); ++k) s += ginv(i, k) * a(i, k);
  return s;
}

namespace detail {

/// One (i,j) slab of the Schouten curvature:
/// e_i(c_jk^h) - e_j(c_ik^h) + c_jk^e c_ie^h - c_ik^e c_je^h
/// - Omega_ij^e c_ek^h - M_ij^a Lambda_ak^h.
inline double schouten_entry(const ConnectionJets& cj, const Tensor3& c, const std::vector<std::vector<Jet>>& cols,
                             int i, int j, int k, int h) {
  const FrameJets& f = cj.frame;
  const int ell = f.ell;
  double s = derive(cj.coeff(j, k, h), cols[i], 0).value() - derive(cj.coeff(i, k, h), cols[j], 0).value();
  for (int e = 0; e < ell; ++e) {
    s += c(j, k, e) * c(i, e, h) - c(i, k, e) * c(j, e, h);
    s -= f.omega(i, j, e).value() * c(e, k, h);
  }
  for (int a = 0; a < f.n - ell; ++a) s -= f.mcoef(i, j, a).value() * f.lambda(a, k, h);
  return s;
}

}  // namespace detail

/// Curvature tensor only. With `mirror` the (j,i) slabs are copied from
/// (i,j) with a sign flip; without it every slab is evaluated independently.
inline Tensor4 schouten_tensor(const ConnectionJets& cj, bool mirror = true) {
  if (cj.frame.order < 1) throw OrderExhausted("curvature needs order-1 connection coefficients");
  const int ell = cj.frame.ell;
  const Tensor3 c = values(cj.coeff);
  std::vector<std::vector<Jet>> cols;
  for (int i = 0; i < ell; ++i) cols.push_back(cj.frame.column(i, 0));
  Tensor4 curv({ell, ell, ell, ell});
  for (int i = 0; i < ell; ++i) {
    for (int j = mirror ? i + 1 : 0; j < ell; ++j) {
      if (mirror || i != j) {
        for (int k = 0; k < ell; ++k)
          for (int h = 0; h < ell; ++h) {
            const double v = detail::schouten_entry(cj, c, cols, i, j, k, h);
            curv(i, j, k, h) = v;
            if (mirror) curv(j, i, k, h) = -v;
          }
      }
    }
  }
  return curv;
}

inline CurvatureBundle make_bundle(ConnectionKind kind, std::span<const double> point, Tensor4 curv,
                                   const Matrix& gram, const Matrix& gram_inv) {
  const int ell = curv.extent(0);
  CurvatureBundle b;
  b.kind = kind;
  b.point.assign(point.begin(), point.end());
  b.ricci = first_trace(curv);
  b.scalar = trace_with(b.ricci, gram_inv);
  b.lowered = Tensor4({ell, ell, ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j)
      for (int k = 0; k < ell; ++k)
        for (int h = 0; h < ell; ++h) {
          double s = 0.0;
          for (int m = 0; m < ell; ++m) s += curv(i, j, k, m) * gram(m, h);
          b.lowered(i, j, k, h) = s;
        }
  b.curv = std::move(curv);
  b.gram = gram;
  b.gram_inv = gram_inv;
  return b;
}

inline CurvatureBundle schouten_curvature(const ConnectionJets& cj) {
  return make_bundle(cj.kind, cj.frame.point, schouten_tensor(cj), values(cj.frame.gram), values(cj.frame.gram_inv));
}

inline CurvatureBundle schouten_curvature(const ConnectionField& conn, std::span<const double> point) {
  return schouten_curvature(conn.evaluate(point, 1));
}

/// pi_ik = nabla_i pi_k - pi_i pi_k + 1/2 g_ik pi_h pi^h, its mixed form
/// pi_i^h = pi_ik g^kh, and the trace alpha.
struct CharacteristicTensor {
  Matrix pi_lower;
  Matrix pi_mixed;
  double alpha = 0.0;
};

/// Builds the characteristic tensor from nabla-pi and the one-form values.
inline CharacteristicTensor characteristic_from(const Matrix& nabla_pi, std::span<const double> pi,
                                                const Matrix& gram, const Matrix& gram_inv) {
  const int ell = gram.extent(0);
  double norm2 = 0.0;
  for (int a = 0; a < ell; ++a)
    for (int b = 0; b < ell; ++b) norm2 += gram_inv(a, b) * pi[a] * pi[b];
  CharacteristicTensor t;
  t.pi_lower = Matrix({ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int k = 0; k < ell; ++k) t.pi_lower(i, k) = nabla_pi(i, k) - pi[i] * pi[k] + 0.5 * gram(i, k) * norm2;
  t.pi_mixed = raise_second(t.pi_lower, gram_inv);
  for (int i = 0; i < ell; ++i) t.alpha += t.pi_mixed(i, i);
  return t;
}

inline CharacteristicTensor characteristic_tensor(const ConnectionJets& koszul, const OneFormJets& pi) {
  std::vector<double> p;
  for (const auto& j : pi.lower) p.push_back(j.value());
  return characteristic_from(covariant_oneform(koszul, pi), p, values(koszul.frame.gram),
                             values(koszul.frame.gram_inv));
}

inline CharacteristicTensor characteristic_tensor(const ManifoldSpec& spec, const OneFormData& pi,
                                                  std::span<const double> point) {
  const ConnectionJets cj = koszul_connection(spec).evaluate(point, 0);
  return characteristic_tensor(cj, evaluate_oneform(pi, cj.frame));
}

namespace detail {

inline void require_rank(int ell, int minimum, const char* what) {
  if (ell < minimum) {
    throw RankTooSmall(std::string(what) + " needs horizontal rank >= " + std::to_string(minimum) + ", have " +
                       std::to_string(ell));
  }
}

}  // namespace detail

/// The combination
/// X^h_ijk - 1/(l-2) { d_j^h Ric_ik - d_i^h Ric_jk + g_ik Ric_j^h - g_jk Ric_i^h }
///         + Sc/((l-1)(l-2)) (g_ik d_j^h - g_jk d_i^h)
/// which is unchanged by the passage nabla -> D.
inline Tensor4 s_tensor(const CurvatureBundle& b) {
  const int ell = b.curv.extent(0);
  detail::require_rank(ell, 3, "S tensor");
  const Matrix& g = b.gram;
  const Matrix ric_up = raise_second(b.ricci, b.gram_inv);
  const double c1 = 1.0 / (ell - 2);
  const double c2 = b.scalar / ((ell - 1.0) * (ell - 2.0));
  Tensor4 s = b.curv;
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j)
      for (int k = 0; k < ell; ++k)
        for (int h = 0; h < ell; ++h) {
          const double brace = delta(j, h) * b.ricci(i, k) - delta(i, h) * b.ricci(j, k) +
                               g(i, k) * ric_up(j, h) - g(j, k) * ric_up(i, h);
          s(i, j, k, h) += -c1 * brace + c2 * (g(i, k) * delta(j, h) - g(j, k) * delta(i, h));
        }
  return s;
}

/// Weyl-type conformal tensor. Consumes both traces K^e_iek and K^e_ike.
inline Tensor4 conformal_tensor(const CurvatureBundle& b) {
  const int ell = b.curv.extent(0);
  detail::require_rank(ell, 3, "conformal tensor");
  const Matrix& g = b.gram;
  const Matrix ric2 = second_trace(b.curv);
  const Matrix ric_up = raise_second(b.ricci, b.gram_inv);
  const Matrix ric2_up = raise_second(ric2, b.gram_inv);
  const double l = ell;
  const double sc = b.scalar / (2.0 * (l - 1.0));
  Tensor4 c = b.curv;
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j)
      for (int k = 0; k < ell; ++k)
        for (int h = 0; h < ell; ++h) {
          const double brace =
              delta(j, h) * (b.ricci(i, k) - ric2(i, k) / l - sc * g(i, k)) -
              delta(i, h) * (b.ricci(j, k) - ric2(j, k) / l - sc * g(j, k)) +
              g(i, k) * (ric_up(j, h) - ric2_up(j, h) / l - sc * delta(j, h)) -
              g(j, k) * (ric_up(i, h) - ric2_up(i, h) / l - sc * delta(i, h));
          c(i, j, k, h) += -brace / (l - 2.0) + delta(k, h) * ric2(i, j) / l;
        }
  return c;
}

/// Weyl-type projective tensor X - 1/(l-1)(d_j^h Ric_ik - d_i^h Ric_jk).
inline Tensor4 projective_tensor(const CurvatureBundle& b) {
  const int ell = b.curv.extent(0);
  detail::require_rank(ell, 2, "projective tensor");
  Tensor4 w = b.curv;
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j)
      for (int k = 0; k < ell; ++k)
        for (int h = 0; h < ell; ++h)
          w(i, j, k, h) -= (delta(j, h) * b.ricci(i, k) - delta(i, h) * b.ricci(j, k)) / (ell - 1.0);
  return w;
}

/// d_j^h pi_ik - d_i^h pi_jk + pi_j^h g_ik - pi_i^h g_jk: the gap R - K.
inline Tensor4 curvature_shift(const CharacteristicTensor& t, const Matrix& g) {
  const int ell = g.extent(0);
  Tensor4 p({ell, ell, ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j)
      for (int k = 0; k < ell; ++k)
        for (int h = 0; h < ell; ++h)
          p(i, j, k, h) = delta(j, h) * t.pi_lower(i, k) - delta(i, h) * t.pi_lower(j, k) +
                          t.pi_mixed(j, h) * g(i, k) - t.pi_mixed(i, h) * g(j, k);
  return p;
}

/// Ricci gap (l-2) pi_ik + alpha g_ik.
inline Matrix ricci_shift(const CharacteristicTensor& t, const Matrix& g) {
  const int ell = g.extent(0);
  Matrix r({ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int k = 0; k < ell; ++k) r(i, k) = (ell - 2.0) * t.pi_lower(i, k) + t.alpha * g(i, k);
  return r;
}

/// Closed-form prediction of Cbar - C in terms of the characteristic tensor.
inline Tensor4 conformal_shift(const CharacteristicTensor& t, const Matrix& g) {
  const int ell = g.extent(0);
  detail::require_rank(ell, 3, "conformal shift");
  const double l = ell;
  Tensor4 d({ell, ell, ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j)
      for (int k = 0; k < ell; ++k)
        for (int h = 0; h < ell; ++h) {
          const double p = delta(j, h) * t.pi_lower(i, k) - delta(i, h) * t.pi_lower(j, k) +
                           g(i, k) * t.pi_mixed(j, h) - g(j, k) * t.pi_mixed(i, h);
          d(i, j, k, h) = -p / l - 2.0 * t.alpha / (l * (l - 2.0)) * (delta(j, h) * g(i, k) - delta(i, h) * g(j, k)) -
                          (l - 2.0) / l * delta(k, h) * t.pi_lower(i, j) - t.alpha / l * delta(k, h) * g(i, j);
        }
  return d;
}

/// Closed-form prediction of Wbar - W.
inline Tensor4 projective_shift(const CharacteristicTensor& t, const Matrix& g) {
  const int ell = g.extent(0);
  const double l1 = ell - 1.0;
  Tensor4 d({ell, ell, ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j)
      for (int k = 0; k < ell; ++k)
        for (int h = 0; h < ell; ++h)
          d(i, j, k, h) = (delta(j, h) * t.pi_lower(i, k) - delta(i, h) * t.pi_lower(j, k)) / l1 +
                          (g(i, k) * t.pi_mixed(j, h) - g(j, k) * t.pi_mixed(i, h)) -
                          t.alpha / l1 * (delta(j, h) * g(i, k) - delta(i, h) * g(j, k));
  return d;
}

/// 1/(2-l) (K^e_iek - K/(2(l-1)) g_ik): the characteristic tensor a flat D
/// would have to carry.
inline Matrix flat_characteristic(const CurvatureBundle& nabla) {
  const int ell = nabla.gram.extent(0);
  detail::require_rank(ell, 3, "flatness criterion");
  Matrix r({ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int k = 0; k < ell; ++k)
      r(i, k) = (nabla.ricci(i, k) - nabla.scalar / (2.0 * (ell - 1.0)) * nabla.gram(i, k)) / (2.0 - ell);
  return r;
}

}  // namespace srclab
