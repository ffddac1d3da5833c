#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "srclab/catalog.hpp"
#include "srclab/manifold.hpp"
#include "srclab/spec_format.hpp"
#include "srclab/verifier.hpp"

using namespace srclab;

namespace {

std::vector<double> bracket_at(const VectorField& b, const std::vector<double>& p) {
  std::vector<double> v;
  for (const auto& c : b) v.push_back(c.value(p));
  return v;
}

}  // namespace

// [X1, X2] = dz on the Heisenberg group, at every point.
TEST(Brackets, HeisenbergOne) {
  const ManifoldSpec s = builtin("heisenberg1").spec;
  for (const auto& p : sample_points(s, 10, 3)) {
    const auto b = bracket_at(lie_bracket(s.hframe[0], s.hframe[1]), p);
    EXPECT_NEAR(b[0], 0.0, 1e-15);
    EXPECT_NEAR(b[1], 0.0, 1e-15);
    EXPECT_NEAR(b[2], 1.0, 1e-15);
    const FrameSnapshot f = snapshot(s, p);
    EXPECT_NEAR(f.mcoef(0, 1, 0), 1.0, 1e-15);
    EXPECT_NEAR(f.mcoef(1, 0, 0), -1.0, 1e-15);
    EXPECT_EQ(max_abs(f.omega), 0.0);
    EXPECT_EQ(max_abs(f.lambda), 0.0);
  }
}

TEST(Brackets, HeisenbergTwo) {
  const ManifoldSpec s = builtin("heisenberg2").spec;
  const FrameSnapshot f = snapshot(s, std::vector<double>{0.3, -0.7, 0.2, 0.9, -0.4});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double expect = (i == 0 && j == 1) || (i == 2 && j == 3) ? 1.0 : (i == 1 && j == 0) || (i == 3 && j == 2) ? -1.0 : 0.0;
      EXPECT_NEAR(f.mcoef(i, j, 0), expect, 1e-15) << i << j;
    }
  EXPECT_EQ(max_abs(f.omega), 0.0);
}

TEST(Brackets, FreeStepTwo) {
  const ManifoldSpec s = builtin("free-step2-l3").spec;
  const FrameSnapshot f = snapshot(s, std::vector<double>{0.1, 0.2, -0.3, 0.4, 0.5, -0.6});
  EXPECT_NEAR(f.mcoef(0, 1, 0), 1.0, 1e-15);
  EXPECT_NEAR(f.mcoef(0, 2, 1), 1.0, 1e-15);
  EXPECT_NEAR(f.mcoef(1, 2, 2), 1.0, 1e-15);
  EXPECT_NEAR(f.mcoef(0, 1, 1), 0.0, 1e-15);
  EXPECT_NEAR(f.mcoef(0, 1, 2), 0.0, 1e-15);
}

TEST(Brackets, FlatIsZero) {
  const ManifoldSpec s = builtin("flat3").spec;
  const FrameSnapshot f = snapshot(s, std::vector<double>{0.4, 0.1, -0.2});
  EXPECT_EQ(max_abs(f.omega), 0.0);
  EXPECT_EQ(max_abs(f.mcoef), 0.0);
  EXPECT_EQ(max_abs(f.lambda), 0.0);
}

// curved-metric-l3: [X1, X3] = -(y/2) dx - dy. Expanding in the frame by hand:
// Omega_13^1 = -y/2, Omega_13^2 = -1 + yz/2, Omega_13^3 = 0,
// M_13 = -y^2/4 + x/2 - xyz/4.
TEST(Brackets, CurvedFrameByHand) {
  const ManifoldSpec s = builtin("curved-metric-l3").spec;
  for (const auto& p : sample_points(s, 10, 5)) {
    const double x = p[0], y = p[1], z = p[2];
    const auto b = bracket_at(lie_bracket(s.hframe[0], s.hframe[2]), p);
    EXPECT_NEAR(b[0], -y / 2, 1e-15);
    EXPECT_NEAR(b[1], -1.0, 1e-15);
    EXPECT_NEAR(b[2], 0.0, 1e-15);
    EXPECT_NEAR(b[3], 0.0, 1e-15);
    const FrameSnapshot f = snapshot(s, p);
    EXPECT_NEAR(f.omega(0, 2, 0), -y / 2, 1e-14);
    EXPECT_NEAR(f.omega(0, 2, 1), -1.0 + y * z / 2, 1e-14);
    EXPECT_NEAR(f.omega(0, 2, 2), 0.0, 1e-14);
    EXPECT_NEAR(f.mcoef(0, 2, 0), -y * y / 4 + x / 2 - x * y * z / 4, 1e-14);
  }
}

TEST(Brackets, InvolutiveHasNoVerticalPart) {
  const ManifoldSpec s = builtin("involutive-l3").spec;
  for (const auto& p : sample_points(s, 10, 2)) {
    const FrameSnapshot f = snapshot(s, p);
    EXPECT_LE(max_abs(f.mcoef), 1e-15);
    EXPECT_NEAR(f.omega(0, 1, 2), 1.0, 1e-15);
  }
}

class FrameProperties : public ::testing::TestWithParam<std::string> {};

TEST_P(FrameProperties, JacobiIdentity) {
  const ManifoldSpec s = builtin(GetParam()).spec;
  std::vector<VectorField> fields;
  for (int a = 0; a < s.n; ++a) fields.push_back(to_field(s.frame(a)));
  for (const auto& p : sample_points(s, 5, 9)) {
    for (int a = 0; a < s.n; ++a)
      for (int b = a + 1; b < s.n; ++b)
        for (int c = b + 1; c < s.n; ++c) {
          const auto j1 = bracket_at(lie_bracket(lie_bracket(fields[a], fields[b]), fields[c]), p);
          const auto j2 = bracket_at(lie_bracket(lie_bracket(fields[b], fields[c]), fields[a]), p);
          const auto j3 = bracket_at(lie_bracket(lie_bracket(fields[c], fields[a]), fields[b]), p);
          for (int m = 0; m < s.n; ++m) EXPECT_NEAR(j1[m] + j2[m] + j3[m], 0.0, 1e-13);
        }
  }
}

// [e_i, e_j] rebuilt from Omega and M equals the bracket itself.
TEST_P(FrameProperties, StructureConstantsReconstructBrackets) {
  const ManifoldSpec s = builtin(GetParam()).spec;
  for (const auto& p : sample_points(s, 10, 4)) {
    const FrameSnapshot f = snapshot(s, p);
    for (int i = 0; i < s.ell; ++i)
      for (int j = 0; j < s.ell; ++j) {
        const auto b = bracket_at(lie_bracket(s.hframe[i], s.hframe[j]), p);
        for (int m = 0; m < s.n; ++m) {
          double r = 0.0;
          for (int k = 0; k < s.ell; ++k) r += f.omega(i, j, k) * f.frame(m, k);
          for (int a = 0; a < s.n - s.ell; ++a) r += f.mcoef(i, j, a) * f.frame(m, s.ell + a);
          EXPECT_NEAR(r, b[m], 1e-13);
        }
      }
    for (int a = 0; a < s.n - s.ell; ++a)
      for (int k = 0; k < s.ell; ++k) {
        const auto b = bracket_at(lie_bracket(s.vframe[a], s.hframe[k]), p);
        const auto h = project_h(s, p, b);
        for (int q = 0; q < s.ell; ++q) EXPECT_NEAR(h[q], f.lambda(a, k, q), 1e-13);
      }
  }
}

TEST_P(FrameProperties, InversesAndProjection) {
  const ManifoldSpec s = builtin(GetParam()).spec;
  for (const auto& p : sample_points(s, 10, 6)) {
    const FrameSnapshot f = snapshot(s, p);
    for (int i = 0; i < s.n; ++i)
      for (int j = 0; j < s.n; ++j) {
        double r = 0.0;
        for (int k = 0; k < s.n; ++k) r += f.frame(i, k) * f.frame_inv(k, j);
        EXPECT_NEAR(r, delta(i, j), 1e-13);
      }
    for (int a = 0; a < s.n; ++a) {
      std::vector<double> col(s.n);
      for (int m = 0; m < s.n; ++m) col[m] = f.frame(m, a);
      const auto h = project_h(s, p, col);
      for (int q = 0; q < s.ell; ++q) EXPECT_NEAR(h[q], a == q ? 1.0 : 0.0, 1e-13);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Catalog, FrameProperties, ::testing::ValuesIn(builtin_names()),
                         [](const auto& info) {
                           std::string n = info.param;
                           for (auto& ch : n)
                             if (ch == '-') ch = '_';
                           return n;
                         });

TEST(Pointwise, SingularFrameAndMetric) {
  ManifoldSpec s = builtin("heisenberg1").spec;
  s.hframe[1] = parse_vector_field("x dy + (x*x/2) dz", s.coords);
  EXPECT_THROW(snapshot(s, std::vector<double>{0.0, 0.5, 0.5}), SingularFrame);
  EXPECT_NO_THROW(snapshot(s, std::vector<double>{0.5, 0.5, 0.5}));
  ManifoldSpec t = builtin("heisenberg1").spec;
  t.metric[0][0] = parse_expression("x", t.coords);
  EXPECT_THROW(snapshot(t, std::vector<double>{-0.5, 0.0, 0.0}), MetricNotSPD);
  EXPECT_THROW(snapshot(t, std::vector<double>{0.5, 0.0}), DimensionMismatch);
  EXPECT_THROW(frame_jets(t, std::vector<double>{0.5, 0.0, 0.0}, 2), OrderExhausted);
}
