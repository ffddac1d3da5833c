#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srclab/field.hpp"
#include "srclab/manifold.hpp"

namespace srclab {

enum class ConnectionKind { kSubRiemannian, kSemiSubRiemannian };

inline const char* to_string(ConnectionKind k) {
  return k == ConnectionKind::kSubRiemannian ? "subriemannian" : "semisubriemannian";
}

/// A one-form pi given by its horizontal coframe components pi_i = pi(e_i).
/// The dual vector P (g(P, X) = pi(X)) is only ever used through the raised
/// components pi^i = g^ij pi_j.
struct OneFormData {
  std::vector<Expression> components;

  static OneFormData zero(int ell) { return {std::vector<Expression>(ell, Expression::constant(0.0))}; }

  static OneFormData constant(std::span<const double> values) {
    OneFormData d;
    for (double v : values) d.components.push_back(Expression::constant(v));
    return d;
  }
};

/// Lowered and raised one-form components at a point, as jets.
struct OneFormJets {
  std::vector<Jet> lower;  ///< pi_i, order + 1 of the owning frame
  std::vector<Jet> upper;  ///< pi^i, frame order
};

inline OneFormJets evaluate_oneform(const OneFormData& pi, const FrameJets& f) {
  if (static_cast<int>(pi.components.size()) != f.ell) {
    throw DimensionMismatch("one-form has " + std::to_string(pi.components.size()) +
                            " components, horizontal rank is " + std::to_string(f.ell));
  }
  OneFormJets out;
  for (const auto& c : pi.components) out.lower.push_back(jet_eval(c, f.point, f.order + 1));
  for (int i = 0; i < f.ell; ++i) {
    Jet s = Jet::constant(0.0, f.n, f.order);
    for (int j = 0; j < f.ell; ++j) s += f.gram_inv(i, j) * out.lower[j].truncated(f.order);
    out.upper.push_back(std::move(s));
  }
  return out;
}

/// Everything a connection knows at one point. coeff(i,j,k) is the
/// e_k-component of nabla_{e_i} e_j, a jet of frame.order.
struct ConnectionJets {
  ConnectionKind kind = ConnectionKind::kSubRiemannian;
  FrameJets frame;
  Tensor<Jet, 3> coeff;
  std::optional<OneFormJets> pi;
};

namespace detail {

/// Koszul formula in a non-holonomic frame:
/// 2 {ij,h} g_hk = e_i(g_jk) + e_j(g_ik) - e_k(g_ij)
///               + Omega_ij^e g_ek - Omega_ik^e g_ej - Omega_jk^e g_ei.
inline Tensor<Jet, 3> koszul_coefficients(const FrameJets& f) {
  const int ell = f.ell, o = f.order;
  Tensor<Jet, 3> lowered({ell, ell, ell});
  for (int i = 0; i < ell; ++i) {
    for (int j = 0; j < ell; ++j) {
      for (int k = 0; k < ell; ++k) {
        Jet s = f.dgram(i, j, k) + f.dgram(j, i, k) - f.dgram(k, i, j);
        for (int e = 0; e < ell; ++e) {
          s += f.omega(i, j, e) * f.gram(e, k).truncated(o);
          s -= f.omega(i, k, e) * f.gram(e, j).truncated(o);
          s -= f.omega(j, k, e) * f.gram(e, i).truncated(o);
        }
        lowered(i, j, k) = s * 0.5;
      }
    }
  }
  Tensor<Jet, 3> coeff({ell, ell, ell});
  for (int i = 0; i < ell; ++i) {
    for (int j = 0; j < ell; ++j) {
      for (int h = 0; h < ell; ++h) {
        Jet s = f.gram_inv(h, 0) * lowered(i, j, 0);
        for (int k = 1; k < ell; ++k) s += f.gram_inv(h, k) * lowered(i, j, k);
        coeff(i, j, h) = std::move(s);
      }
    }
  }
  return coeff;
}

/// Gamma_ij^k = {ij,k} + delta_i^k pi_j - g_ij pi^k.
inline Tensor<Jet, 3> semi_coefficients(const FrameJets& f, const Tensor<Jet, 3>& koszul, const OneFormJets& pi) {
  const int ell = f.ell, o = f.order;
  Tensor<Jet, 3> coeff = koszul;
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j)
      for (int k = 0; k < ell; ++k) {
        if (i == k) coeff(i, j, k) += pi.lower[j].truncated(o);
        coeff(i, j, k) -= f.gram(i, j).truncated(o) * pi.upper[k];
      }
  return coeff;
}

}  // namespace detail

/// A non-holonomic connection on V0, evaluated lazily at points.
class ConnectionField {
 public:
  ConnectionField(ConnectionKind kind, std::shared_ptr<const ManifoldSpec> spec, std::optional<OneFormData> pi)
      : kind_(kind), spec_(std::move(spec)), pi_(std::move(pi)) {}

  ConnectionKind kind() const noexcept { return kind_; }
  const ManifoldSpec& spec() const noexcept { return *spec_; }
  const std::shared_ptr<const ManifoldSpec>& spec_ptr() const noexcept { return spec_; }
  const std::optional<OneFormData>& oneform() const noexcept { return pi_; }

  /// Connection data with coefficients as jets of `order` (0 or 1).
  ConnectionJets evaluate(std::span<const double> point, int order) const {
    ConnectionJets cj{kind_, frame_jets(*spec_, point, order), {}, std::nullopt};
    cj.coeff = detail::koszul_coefficients(cj.frame);
    if (kind_ == ConnectionKind::kSemiSubRiemannian) {
      cj.pi = evaluate_oneform(*pi_, cj.frame);
      cj.coeff = detail::semi_coefficients(cj.frame, cj.coeff, *cj.pi);
    }
    return cj;
  }

  Tensor3 coefficients(std::span<const double> point) const { return values(evaluate(point, 0).coeff); }

  /// coeff[i][j][k] as a scalar field; jets available up to order 1.
  ScalarField coefficient(int i, int j, int k) const {
    const int ell = spec_->ell;
    if (i < 0 || j < 0 || k < 0 || i >= ell || j >= ell || k >= ell) {
      throw DimensionMismatch("connection coefficient index out of range");
    }
    ConnectionField self = *this;
    return ScalarField(spec_->n, kMaxJetOrder - 1, [self, i, j, k](std::span<const double> p, int order) {
      return self.evaluate(p, order).coeff(i, j, k);
    });
  }

 private:
  ConnectionKind kind_;
  std::shared_ptr<const ManifoldSpec> spec_;
  std::optional<OneFormData> pi_;
};

/// The unique metric, torsion-free non-holonomic connection.
inline ConnectionField koszul_connection(const ManifoldSpec& spec) {
  validate(spec);
  return ConnectionField(ConnectionKind::kSubRiemannian, std::make_shared<const ManifoldSpec>(spec), std::nullopt);
}

/// The semi-symmetric metric connection D_X Y = nabla_X Y + pi(Y) X - g(X,Y) P.
inline ConnectionField semi_connection(const ManifoldSpec& spec, const OneFormData& pi) {
  validate(spec);
  if (static_cast<int>(pi.components.size()) != spec.ell) {
    throw DimensionMismatch("one-form has " + std::to_string(pi.components.size()) +
                            " components, horizontal rank is " + std::to_string(spec.ell));
  }
  for (const auto& c : pi.components) {
    if (c.max_coordinate() >= spec.n) throw DimensionMismatch("one-form references unknown coordinate");
  }
  return ConnectionField(ConnectionKind::kSemiSubRiemannian, std::make_shared<const ManifoldSpec>(spec), pi);
}

/// T_ij^k = coeff_ij^k - coeff_ji^k - Omega_ij^k, as jets of the input order.
inline Tensor<Jet, 3> torsion_jets(const ConnectionJets& cj) {
  const int ell = cj.frame.ell;
  Tensor<Jet, 3> t({ell, ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j)
      for (int k = 0; k < ell; ++k) t(i, j, k) = cj.coeff(i, j, k) - cj.coeff(j, i, k) - cj.frame.omega(i, j, k);
  return t;
}

inline Tensor3 torsion(const ConnectionField& conn, std::span<const double> point) {
  return values(torsion_jets(conn.evaluate(point, 0)));
}

/// (e_i(pi_j) - coeff_ij^k pi_k) for the connection data in `cj`, which
/// must carry one-form jets. Values only.
inline Matrix covariant_oneform(const ConnectionJets& cj, const OneFormJets& pi) {
  const FrameJets& f = cj.frame;
  const int ell = f.ell;
  Matrix out({ell, ell});
  for (int i = 0; i < ell; ++i) {
    const auto ei = f.column(i, 0);
    for (int j = 0; j < ell; ++j) {
      double s = derive(pi.lower[j].truncated(1), ei, 0).value();
      for (int k = 0; k < ell; ++k) s -= cj.coeff(i, j, k).value() * pi.lower[k].value();
      out(i, j) = s;
    }
  }
  return out;
}

/// nabla_i pi_j with nabla the Koszul connection.
inline Matrix nabla_oneform(const ManifoldSpec& spec, const OneFormData& pi, std::span<const double> point) {
  const ConnectionJets cj = koszul_connection(spec).evaluate(point, 0);
  return covariant_oneform(cj, evaluate_oneform(pi, cj.frame));
}

/// (D_i T)_jk^h = e_i(T_jk^h) + coeff_ie^h T_jk^e - coeff_ij^e T_ek^h
///              - coeff_ik^e T_je^h, for the connection's own torsion.
inline Tensor4 covariant_derivative_torsion(const ConnectionJets& cj) {
  if (cj.frame.order < 1) throw OrderExhausted("torsion derivative needs order-1 connection data");
  const int ell = cj.frame.ell;
  const Tensor<Jet, 3> t = torsion_jets(cj);
  const Tensor3 tv = values(t);
  const Tensor3 c = values(cj.coeff);
  Tensor4 out({ell, ell, ell, ell});
  for (int i = 0; i < ell; ++i) {
    const auto ei = cj.frame.column(i, 0);
    for (int j = 0; j < ell; ++j)
      for (int k = 0; k < ell; ++k)
        for (int h = 0; h < ell; ++h) {
          double s = derive(t(j, k, h), ei, 0).value();
          for (int e = 0; e < ell; ++e) {
            s += c(i, e, h) * tv(j, k, e) - c(i, j, e) * tv(e, k, h) - c(i, k, e) * tv(j, e, h);
          }
          out(i, j, k, h) = s;
        }
  }
  return out;
}

inline Tensor4 covariant_derivative_T(const ConnectionField& conn, std::span<const double> point) {
  return covariant_derivative_torsion(conn.evaluate(point, 1));
}

/// Metricity residual e_k(g_ij) - coeff_ki^e g_ej - coeff_kj^e g_ie for
/// coefficient values `coeff` (indexed k,i,e).
inline Tensor3 metricity_residual(const FrameJets& f, const Tensor3& coeff) {
  const int ell = f.ell;
  Tensor3 r({ell, ell, ell});
  for (int k = 0; k < ell; ++k)
    for (int i = 0; i < ell; ++i)
      for (int j = 0; j < ell; ++j) {
        double s = f.dgram(k, i, j).value();
        for (int e = 0; e < ell; ++e) {
          s -= coeff(k, i, e) * f.gram(e, j).value() + coeff(k, j, e) * f.gram(i, e).value();
        }
        r(k, i, j) = s;
      }
  return r;
}

/// T_ij^k - coeff_ij^k + coeff_ji^k + Omega_ij^k for coefficient values.
inline Tensor3 torsion_from_values(const FrameJets& f, const Tensor3& coeff) {
  const int ell = f.ell;
  Tensor3 t({ell, ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j)
      for (int k = 0; k < ell; ++k) t(i, j, k) = coeff(i, j, k) - coeff(j, i, k) - f.omega(i, j, k).value();
  return t;
}

}  // namespace srclab
