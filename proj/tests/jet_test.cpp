#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "srclab/expression.hpp"
#include "srclab/field.hpp"
#include "srclab/jet.hpp"

using namespace srclab;

namespace {

Jet x_of(double x, double, int order) { return Jet::coordinate(0, x, 2, order); }
Jet y_of(double, double y, int order) { return Jet::coordinate(1, y, 2, order); }

void expect_jet_near(const Jet& a, const Jet& b, double tol) {
  ASSERT_EQ(a.dim(), b.dim());
  ASSERT_EQ(a.order(), b.order());
  EXPECT_NEAR(a.value(), b.value(), tol);
  for (int i = 0; i < a.dim() && a.order() >= 1; ++i) EXPECT_NEAR(a.grad(i), b.grad(i), tol);
  for (int i = 0; i < a.dim() && a.order() >= 2; ++i)
    for (int j = 0; j < a.dim(); ++j) EXPECT_NEAR(a.hess(i, j), b.hess(i, j), tol);
}

}  // namespace

// f = sin(x) exp(y); the closed-form Hessian is written out by hand.
TEST(Jet, ClosedFormHessianOfSinExp) {
  const double x = 0.3, y = -0.2;
  const Jet f = sin(x_of(x, y, 2)) * exp(y_of(x, y, 2));
  const double s = std::sin(x), c = std::cos(x), e = std::exp(y);
  EXPECT_NEAR(f.value(), s * e, 1e-15);
  EXPECT_NEAR(f.grad(0), c * e, 1e-15);
  EXPECT_NEAR(f.grad(1), s * e, 1e-15);
  EXPECT_NEAR(f.hess(0, 0), -s * e, 1e-15);
  EXPECT_NEAR(f.hess(0, 1), c * e, 1e-15);
  EXPECT_NEAR(f.hess(1, 0), c * e, 1e-15);
  EXPECT_NEAR(f.hess(1, 1), s * e, 1e-15);
}

TEST(Jet, QuotientAndPowers) {
  // u = x / (1 + y^2) at (2, 1): du/dx = 1/2, du/dy = -2xy/(1+y^2)^2 = -1
  const Jet x = x_of(2.0, 1.0, 2), y = y_of(2.0, 1.0, 2);
  const Jet u = x / (1.0 + ipow(y, 2));
  EXPECT_DOUBLE_EQ(u.value(), 1.0);
  EXPECT_DOUBLE_EQ(u.grad(0), 0.5);
  EXPECT_DOUBLE_EQ(u.grad(1), -1.0);
  // d2u/dy2 = 2x(3y^2 - 1)/(1+y^2)^3 = 1
  EXPECT_NEAR(u.hess(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(u.hess(0, 1), -0.5, 1e-15);
  EXPECT_DOUBLE_EQ(ipow(x, 0).value(), 1.0);
  EXPECT_DOUBLE_EQ(ipow(x, 3).hess(0, 0), 12.0);
}

TEST(Jet, Errors) {
  const Jet x = x_of(0.0, 0.0, 1);
  EXPECT_THROW(log(x), DomainError);
  EXPECT_THROW(reciprocal(x), DomainError);
  EXPECT_THROW(sqrt(x), DomainError);
  EXPECT_NO_THROW(sqrt(Jet::constant(0.0, 2, 0)));
  EXPECT_THROW(sqrt(Jet::constant(-1.0, 2, 0)), DomainError);
  EXPECT_THROW(x + Jet::coordinate(0, 0.0, 3, 1), DimensionMismatch);
  EXPECT_THROW(x + Jet::coordinate(0, 0.0, 2, 2), DimensionMismatch);
  EXPECT_THROW(Jet::constant(1.0, 2, 3), OrderExhausted);
}

TEST(Jet, DeriveNeedsOneMoreOrder) {
  const Jet f = x_of(0.5, 0.5, 1) * y_of(0.5, 0.5, 1);
  const std::vector<Jet> dir = {Jet::constant(1.0, 2, 0), Jet::constant(0.0, 2, 0)};
  EXPECT_DOUBLE_EQ(derive(f, dir, 0).value(), 0.5);
  const std::vector<Jet> dir1 = {Jet::constant(1.0, 2, 1), Jet::constant(0.0, 2, 1)};
  EXPECT_THROW(derive(f, dir1, 1), OrderExhausted);
}

// e_1 = d/dx + x d/dy applied to f = x y: e_1 f = y + x^2, gradient (2x, 1).
TEST(Jet, DeriveAlongVariableDirection) {
  const double x = 0.7, y = -0.4;
  const Jet f = x_of(x, y, 2) * y_of(x, y, 2);
  const std::vector<Jet> dir = {Jet::constant(1.0, 2, 1), x_of(x, y, 1)};
  const Jet d = derive(f, dir, 1);
  EXPECT_NEAR(d.value(), y + x * x, 1e-15);
  EXPECT_NEAR(d.grad(0), 2 * x, 1e-15);
  EXPECT_NEAR(d.grad(1), 1.0, 1e-15);
}

// Properties over random points and a fixed family of expressions.
class JetProperties : public ::testing::Test {
 protected:
  std::vector<Expression> exprs() const {
    const Expression x = Expression::coordinate(0), y = Expression::coordinate(1), z = Expression::coordinate(2);
    const Expression one = Expression::constant(1.0);
    return {
        x * y - z,
        Expression::apply(Function::kSin, x * z) + Expression::power(y, 3),
        Expression::apply(Function::kExp, Expression::constant(0.5) * y) / (one + x * x),
        Expression::apply(Function::kLog, Expression::constant(2.0) + Expression::apply(Function::kCos, z)),
        Expression::apply(Function::kSqrt, Expression::constant(3.0) + x * y),
    };
  }
  std::mt19937_64 rng{7};
  std::vector<double> point() {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng), u(rng), u(rng)};
  }
};

TEST_F(JetProperties, LinearityAndLeibniz) {
  const auto es = exprs();
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = point();
    std::vector<Jet> dir;
    for (int m = 0; m < 3; ++m) dir.push_back(jet_eval(es[(trial + m) % es.size()], p, 1));
    const Jet f = jet_eval(es[trial % es.size()], p, 2);
    const Jet g = jet_eval(es[(trial + 2) % es.size()], p, 2);
    const double a = 1.7, b = -0.3;
    expect_jet_near(derive(a * f + b * g, dir, 1), a * derive(f, dir, 1) + b * derive(g, dir, 1), 1e-12);
    expect_jet_near(derive(f * g, dir, 1), f.truncated(1) * derive(g, dir, 1) + g.truncated(1) * derive(f, dir, 1),
                    1e-12);
  }
}

TEST_F(JetProperties, TruncationIsConsistent) {
  for (const auto& e : exprs()) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = point();
      const Jet j2 = jet_eval(e, p, 2);
      EXPECT_EQ(j2.truncated(1), jet_eval(e, p, 1));
      EXPECT_EQ(j2.truncated(0), jet_eval(e, p, 0));
      EXPECT_DOUBLE_EQ(j2.value(), eval_value(e, p));
    }
  }
}

TEST_F(JetProperties, HessianIsSymmetricAndMatchesFiniteDifferences) {
  for (const auto& e : exprs()) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = point();
      const Jet j = jet_eval(e, p, 2);
      for (int a = 0; a < 3; ++a) {
        std::vector<double> pp = p, pm = p;
        pp[a] += 1e-5;
        pm[a] -= 1e-5;
        const Jet jp = jet_eval(e, pp, 1), jm = jet_eval(e, pm, 1);
        EXPECT_NEAR(j.grad(a), (eval_value(e, pp) - eval_value(e, pm)) / 2e-5, 1e-8 * std::max(1.0, std::abs(j.grad(a))));
        for (int b = 0; b < 3; ++b) {
          EXPECT_DOUBLE_EQ(j.hess(a, b), j.hess(b, a));
          EXPECT_NEAR(j.hess(a, b), (jp.grad(b) - jm.grad(b)) / 2e-5, 1e-7 * std::max(1.0, std::abs(j.hess(a, b))));
        }
      }
    }
  }
}

TEST(ScalarField, OrderBudget) {
  const Expression x = Expression::coordinate(0);
  const ScalarField f = ScalarField::from_expression(x * x, 2);
  const VectorField dir = {ScalarField::from_expression(Expression::constant(1.0), 2),
                           ScalarField::from_expression(Expression::constant(0.0), 2)};
  const ScalarField d1 = directional_derivative(f, dir);
  EXPECT_EQ(d1.max_order(), 1);
  const std::vector<double> p = {0.25, 0.0};
  EXPECT_DOUBLE_EQ(d1.value(p), 0.5);
  EXPECT_DOUBLE_EQ(d1.evaluate(p, 1).grad(0), 2.0);
  const ScalarField d2 = directional_derivative(d1, dir);
  EXPECT_DOUBLE_EQ(d2.value(p), 2.0);
  EXPECT_THROW(d2.evaluate(p, 1), OrderExhausted);
  EXPECT_THROW(directional_derivative(d2, dir).value(p), OrderExhausted);
  EXPECT_LT(fd_crosscheck(f, p, dir, 1e-5), 1e-9);
}
