#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "finsler2d/errors.hpp"
#include "finsler2d/expression.hpp"

using namespace finsler2d;

TEST(Expression, EvaluatesPolynomial) { EXPECT_DOUBLE_EQ(parse_expression("x1*x1 + 1")(2.0, 0.0), 5.0); }

TEST(Expression, PythagoreanIdentity) {
  const Expression e = parse_expression("sin(x1)^2 + cos(x1)^2");
  for (double x : {-3.0, -0.4, 0.0, 1.1, 7.5}) EXPECT_NEAR(e(x, 0.3), 1.0, 1e-15);
}

TEST(Expression, Atan2) { EXPECT_NEAR(parse_expression("atan2(x2, x1)")(1.0, 1.0), std::numbers::pi / 4, 1e-15); }

TEST(Expression, PrecedenceAndUnaryMinus) {
  EXPECT_DOUBLE_EQ(parse_expression("-x1^2")(3.0, 0.0), -9.0);
  EXPECT_DOUBLE_EQ(parse_expression("2^3^2")(0.0, 0.0), 512.0);
  EXPECT_DOUBLE_EQ(parse_expression("1 - 2 - 3")(0.0, 0.0), -4.0);
  EXPECT_DOUBLE_EQ(parse_expression("8 / 4 / 2")(0.0, 0.0), 1.0);
}

TEST(Expression, Derivatives) {
  const Expression d = diff_expression(parse_expression("x1*x2"), 0);
  EXPECT_DOUBLE_EQ(d(0.7, -2.5), -2.5);
  EXPECT_DOUBLE_EQ(diff_expression(parse_expression("sin(x1)"), 0)(0.0, 0.0), 1.0);
  const Expression z = diff_expression(parse_expression("exp(x1)"), 1);
  for (double x : {-1.0, 0.0, 2.0}) EXPECT_EQ(z(x, x), 0.0);
}

TEST(Expression, MixedPartialsCommute) {
  const Expression e = parse_expression("exp(0.3*x1*x2)*sin(x1 - x2^2) + sqrt(1 + 0.25*x1^2)*atan2(x2, 2 + x1)");
  const Expression a = diff_expression(diff_expression(e, 0), 1);
  const Expression b = diff_expression(diff_expression(e, 1), 0);
  for (double u : {-0.8, -0.1, 0.4, 0.9})
    for (double v : {-0.7, 0.2, 0.6}) EXPECT_NEAR(a(u, v), b(u, v), 1e-12 * std::max(1.0, std::abs(a(u, v))));
}

TEST(Expression, DerivativeMatchesDifferences) {
  const Expression e = parse_expression("ln(2 + x1^2)*cos(x2)/(1 + x1*x1)");
  const Expression d = diff_expression(e, 0);
  const double h = 1e-5, u = 0.3, v = -0.4;
  EXPECT_NEAR(d(u, v), (e(u + h, v) - e(u - h, v)) / (2 * h), 1e-9);
}

TEST(Expression, ConstantsFold) {
  const Expression e = parse_expression("2*3 + 1");
  EXPECT_TRUE(e.is_constant());
  EXPECT_DOUBLE_EQ(e.constant_value(), 7.0);
  EXPECT_FALSE(parse_expression("x1 + 0*x2").is_constant());
}

TEST(Expression, PrintRoundTrips) {
  const Expression e = parse_expression("sqrt(1 + 0.25*x1^2)*cos(0.4*x1 - 0.3*x2)");
  const Expression r = parse_expression(print_expression(e));
  EXPECT_NEAR(e(0.3, 0.7), r(0.3, 0.7), 1e-15);
}

TEST(Expression, Errors) {
  EXPECT_THROW(parse_expression("x1 +"), SyntaxError);
  EXPECT_THROW(parse_expression("(x1"), SyntaxError);
  EXPECT_THROW(parse_expression("y1 + 1"), UnknownIdentifier);
  EXPECT_THROW(parse_expression("foo(x1)"), UnknownIdentifier);
  EXPECT_THROW(parse_expression("sqrt(x1)")(-1.0, 0.0), EvalError);
  EXPECT_THROW(parse_expression("1/x1")(0.0, 0.0), EvalError);
  EXPECT_THROW(parse_expression("ln(x1)")(0.0, 0.0), EvalError);
}
