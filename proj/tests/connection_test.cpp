#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "srclab/catalog.hpp"
#include "srclab/connection.hpp"
#include "srclab/spec_format.hpp"
#include "srclab/verifier.hpp"

using namespace srclab;

namespace {

// l = 2 with a single non-constant metric entry g_11 = 1 + x^2.
const char* kWarped = R"(manifold warped
dim 3
hdim 2
coords x y z
hframe
  X1 = dx
  X2 = dy
vframe
  Z = dz
metric rows
  (1 + x^2)  0
  0          1
)";

std::vector<double> pt(std::initializer_list<double> v) { return v; }

/// Koszul coefficients from double-precision ingredients: e_i(g_jk) by
/// central differences along the frame, Omega from the symbolic brackets,
/// and an Eigen solve with g.
Tensor3 koszul_by_differences(const ManifoldSpec& s, const std::vector<double>& p) {
  const int n = s.n, ell = s.ell;
  const double h = 1e-5;
  Eigen::MatrixXd e(n, n);
  for (int a = 0; a < n; ++a)
    for (int m = 0; m < n; ++m) e(m, a) = eval_value(s.frame(a).components[m], p);
  auto metric_at = [&](const std::vector<double>& q) {
    Eigen::MatrixXd g(ell, ell);
    for (int i = 0; i < ell; ++i)
      for (int j = 0; j < ell; ++j) g(i, j) = eval_value(s.metric[i][j], q);
    return g;
  };
  std::vector<Eigen::MatrixXd> dg(ell);
  for (int i = 0; i < ell; ++i) {
    std::vector<double> qp = p, qm = p;
    for (int m = 0; m < n; ++m) {
      qp[m] += h * e(m, i);
      qm[m] -= h * e(m, i);
    }
    dg[i] = (metric_at(qp) - metric_at(qm)) / (2 * h);
  }
  const Eigen::MatrixXd g = metric_at(p);
  Tensor3 omega({ell, ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j) {
      const VectorField b = lie_bracket(s.hframe[i], s.hframe[j]);
      Eigen::VectorXd v(n);
      for (int m = 0; m < n; ++m) v(m) = b[m].value(p);
      const Eigen::VectorXd c = e.partialPivLu().solve(v);
      for (int k = 0; k < ell; ++k) omega(i, j, k) = c(k);
    }
  Tensor3 out({ell, ell, ell});
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j) {
      Eigen::VectorXd rhs(ell);
      for (int k = 0; k < ell; ++k) {
        double r = dg[i](j, k) + dg[j](i, k) - dg[k](i, j);
        for (int q = 0; q < ell; ++q) r += omega(i, j, q) * g(q, k) - omega(i, k, q) * g(q, j) - omega(j, k, q) * g(q, i);
        rhs(k) = 0.5 * r;
      }
      const Eigen::VectorXd c = g.ldlt().solve(rhs);
      for (int k = 0; k < ell; ++k) out(i, j, k) = c(k);
    }
  return out;
}

}  // namespace

// {11,1} = x/(1+x^2) and D_1 pi_1 = -x/(1+x^2) for pi = (1, 0).
TEST(Koszul, WarpedMetricByHand) {
  const ManifoldSpec s = parse_manifold(kWarped);
  for (double x : {-0.8, -0.1, 0.0, 0.35, 0.9}) {
    const auto p = pt({x, 0.2, -0.4});
    const Tensor3 c = koszul_connection(s).coefficients(p);
    EXPECT_NEAR(c(0, 0, 0), x / (1 + x * x), 1e-15);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          if (i + j + k > 0) EXPECT_EQ(c(i, j, k), 0.0) << i << j << k;
    const std::vector<double> one = {1.0, 0.0};
    const Matrix np = nabla_oneform(s, OneFormData::constant(one), p);
    EXPECT_NEAR(np(0, 0), -x / (1 + x * x), 1e-15);
    EXPECT_EQ(np(1, 0), 0.0);
  }
}

// With a left-invariant orthonormal frame all Koszul symbols vanish, and
// Gamma_ij^k = d_i^k pi_j - g_ij pi^k is the whole connection.
TEST(Koszul, HeisenbergSemiConnectionByHand) {
  const ManifoldSpec s = builtin("heisenberg1").spec;
  const auto p = pt({0.3, -0.6, 0.8});
  EXPECT_EQ(max_abs(koszul_connection(s).coefficients(p)), 0.0);
  const std::vector<double> pi = {1.0, 0.0};
  const Tensor3 g = semi_connection(s, OneFormData::constant(pi)).coefficients(p);
  EXPECT_EQ(g(0, 0, 0), 0.0);
  EXPECT_EQ(g(0, 1, 0), 0.0);
  EXPECT_EQ(g(1, 0, 1), 1.0);
  EXPECT_EQ(g(1, 1, 0), -1.0);
  EXPECT_EQ(g(0, 0, 1), 0.0);
  EXPECT_EQ(g(1, 1, 1), 0.0);
  const Tensor3 t = torsion(semi_connection(s, OneFormData::constant(pi)), p);
  EXPECT_EQ(t(1, 0, 1), 1.0);  // T(e2, e1) = pi(e1) e2
  EXPECT_EQ(t(0, 1, 1), -1.0);
}

class ConnectionProperties : public ::testing::TestWithParam<std::string> {};

TEST_P(ConnectionProperties, MatchesFiniteDifferenceKoszul) {
  const ManifoldSpec s = builtin(GetParam()).spec;
  for (const auto& p : sample_points(s, 10, 21)) {
    const Tensor3 c = koszul_connection(s).coefficients(p);
    const Tensor3 ref = koszul_by_differences(s, p);
    EXPECT_LE(max_abs_diff(c, ref), 1e-8);
  }
}

TEST_P(ConnectionProperties, MetricAndTorsionContracts) {
  const CatalogEntry e = builtin(GetParam());
  const ConnectionField nabla = koszul_connection(e.spec);
  for (const auto& p : sample_points(e.spec, 20, 8)) {
    const ConnectionJets cj = nabla.evaluate(p, 0);
    const Tensor3 c = values(cj.coeff);
    EXPECT_LE(max_abs(metricity_residual(cj.frame, c)), 1e-12);
    EXPECT_LE(max_abs(torsion_from_values(cj.frame, c)), 1e-12);
    for (const auto& v : e.oneforms) {
      const ConnectionField d = semi_connection(e.spec, v.pi);
      const ConnectionJets dj = d.evaluate(p, 0);
      const Tensor3 dc = values(dj.coeff);
      EXPECT_LE(max_abs(metricity_residual(dj.frame, dc)), 1e-12);
      const Tensor3 t = torsion_from_values(dj.frame, dc);
      for (int i = 0; i < e.spec.ell; ++i)
        for (int j = 0; j < e.spec.ell; ++j)
          for (int k = 0; k < e.spec.ell; ++k) {
            const double expect = delta(i, k) * dj.pi->lower[j].value() - delta(j, k) * dj.pi->lower[i].value();
            EXPECT_NEAR(t(i, j, k), expect, 1e-12);
          }
    }
  }
}

// Adding any non-zero tensor to the Koszul coefficients breaks metricity
// or torsion-freeness: the two conditions pin the connection down.
TEST_P(ConnectionProperties, PerturbationsAreDetected) {
  const ManifoldSpec s = builtin(GetParam()).spec;
  const int ell = s.ell;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  const auto p = sample_points(s, 1, 2)[0];
  const ConnectionJets cj = koszul_connection(s).evaluate(p, 0);
  for (int trial = 0; trial < 25; ++trial) {
    Tensor3 a({ell, ell, ell});
    for (auto& v : a.data()) v = nd(rng);
    Tensor3 c = values(cj.coeff);
    for (std::size_t q = 0; q < c.size(); ++q) c.data()[q] += 1e-3 * a.data()[q];
    const double r = std::max(max_abs(metricity_residual(cj.frame, c)), max_abs(torsion_from_values(cj.frame, c)));
    EXPECT_GT(r, 1e-6);
  }
}

TEST_P(ConnectionProperties, CoefficientJetsAgreeWithFiniteDifferences) {
  const CatalogEntry e = builtin(GetParam());
  const ConnectionField d = semi_connection(e.spec, e.oneforms[2].pi);
  const auto p = sample_points(e.spec, 1, 13)[0];
  for (int i = 0; i < e.spec.ell; ++i)
    for (int j = 0; j < e.spec.ell; ++j)
      for (int k = 0; k < e.spec.ell; ++k) {
        const ScalarField f = d.coefficient(i, j, k);
        const Jet jet = f.evaluate(p, 1);
        for (int m = 0; m < e.spec.n; ++m) {
          std::vector<double> qp = p, qm = p;
          qp[m] += 1e-5;
          qm[m] -= 1e-5;
          EXPECT_NEAR(jet.grad(m), (f.value(qp) - f.value(qm)) / 2e-5, 1e-7);
        }
      }
}

INSTANTIATE_TEST_SUITE_P(Catalog, ConnectionProperties, ::testing::ValuesIn(builtin_names()),
                         [](const auto& info) {
                           std::string n = info.param;
                           for (auto& ch : n)
                             if (ch == '-') ch = '_';
                           return n;
                         });

TEST(SemiConnection, RejectsWrongOneForm) {
  const ManifoldSpec s = builtin("heisenberg2").spec;
  const std::vector<double> two = {1.0, 2.0};
  EXPECT_THROW(semi_connection(s, OneFormData::constant(two)), DimensionMismatch);
}
