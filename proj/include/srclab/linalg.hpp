#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "srclab/errors.hpp"
#include "srclab/jet.hpp"
#include "srclab/tensor.hpp"

namespace srclab {

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.extent(0), m.extent(1));
  for (int i = 0; i < m.extent(0); ++i)
    for (int j = 0; j < m.extent(1); ++j) e(i, j) = m(i, j);
  return e;
}

inline Matrix from_eigen(const Eigen::MatrixXd& e) {
  Matrix m({static_cast<int>(e.rows()), static_cast<int>(e.cols())});
  for (int i = 0; i < e.rows(); ++i)
    for (int j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

/// Rejects a frame matrix whose determinant is negligible relative to the
/// product of its column norms.
inline void require_nonsingular(const Eigen::MatrixXd& e) {
  double scale = 1.0;
  for (int j = 0; j < e.cols(); ++j) scale *= std::max(e.col(j).norm(), 1e-300);
  const double det = e.fullPivLu().determinant();
  if (!(std::abs(det) >= 1e-12 * scale)) {
    throw SingularFrame("frame matrix is singular (|det| = " + std::to_string(std::abs(det)) + ")");
  }
}

/// Infinity-norm condition number.
inline double condition_number(const Eigen::MatrixXd& e) {
  const Eigen::MatrixXd inv = e.inverse();
  return e.cwiseAbs().rowwise().sum().maxCoeff() * inv.cwiseAbs().rowwise().sum().maxCoeff();
}

inline void require_spd(const Eigen::MatrixXd& g) {
  if (!g.isApprox(g.transpose(), 1e-12)) throw MetricNotSPD("Gram matrix is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) throw MetricNotSPD("Gram matrix is not positive definite");
}

/// Square matrix of jets, row-major.
using JetMatrix = Tensor<Jet, 2>;

inline Matrix values(const JetMatrix& a) {
  Matrix m({a.extent(0), a.extent(1)});
  for (int i = 0; i < a.extent(0); ++i)
    for (int j = 0; j < a.extent(1); ++j) m(i, j) = a(i, j).value();
  return m;
}

/// Solves A X = B in jet arithmetic by Gaussian elimination with partial
/// pivoting on the values, so X carries the derivatives of A^{-1} B.
inline JetMatrix jet_solve(JetMatrix a, JetMatrix b) {
  const int n = a.extent(0);
  const int m = b.extent(1);
  if (a.extent(1) != n || b.extent(0) != n) throw DimensionMismatch("jet_solve: shape mismatch");
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col).value()) > std::abs(a(piv, col).value())) piv = r;
    if (a(piv, col).value() == 0.0) throw SingularFrame("singular matrix in jet solve");
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
      for (int c = 0; c < m; ++c) std::swap(b(piv, c), b(col, c));
    }
    const Jet inv = reciprocal(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      const Jet f = a(r, col) * inv;
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      for (int c = 0; c < m; ++c) b(r, c) -= f * b(col, c);
    }
  }
  JetMatrix x({n, m});
  for (int c = 0; c < m; ++c) {
    for (int r = n - 1; r >= 0; --r) {
      Jet s = b(r, c);
      for (int k = r + 1; k < n; ++k) s -= a(r, k) * x(k, c);
      x(r, c) = s / a(r, r);
    }
  }
  return x;
}

inline JetMatrix jet_identity(int n, int dim, int order) {
  JetMatrix id({n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) id(i, j) = Jet::constant(i == j ? 1.0 : 0.0, dim, order);
  return id;
}

inline JetMatrix jet_inverse(const JetMatrix& a) {
  const int n = a.extent(0);
  return jet_solve(a, jet_identity(n, a(0, 0).dim(), a(0, 0).order()));
}

}  // namespace srclab
