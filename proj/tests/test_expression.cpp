#include <doctest.h>

#include <cmath>

#include "hsp/expression.hpp"
#include "hsp/field.hpp"

using namespace hsp;

TEST_CASE("expression grammar") {
  const Expression e("2*x1^2 - x2/|x| + exp(-x2) + |x1 - 3|", 2);
  const double x[] = {1.5, 2.0};
  const double r = std::hypot(1.5, 2.0);
  CHECK(e(x) == doctest::Approx(2 * 2.25 - 2 / r + std::exp(-2.0) + 1.5));
  CHECK(Expression("-2^2", 1)(std::span<const double>(x, 1)) == -4);
  CHECK(Expression("2^3^2", 1)(std::span<const double>(x, 1)) == 512);
  CHECK(Expression("pi*e", 1)(std::span<const double>(x, 1)) == doctest::Approx(M_PI * M_E));
}

TEST_CASE("expression errors") {
  CHECK_THROWS_AS(Expression("x3", 2), ExpressionError);
  CHECK_THROWS_AS(Expression("1 +", 2), ExpressionError);
  CHECK_THROWS_AS(Expression("foo(x1)", 2), ExpressionError);
  CHECK_THROWS_AS(Expression("(x1", 2), ExpressionError);
}

TEST_CASE("fields") {
  const ScalarField u = expression_field("x1^2 - x2^2 + 3*x2", 2);
  CHECK(discrete_laplacian(u, HalfSpacePoint{0.3, 1.0}, 1e-2) == doctest::Approx(0).scale(1).epsilon(1e-8));
  const ScalarField v = combine(2, linear_field(2, 1), -1, constant_field(2, 4));
  CHECK(v(HalfSpacePoint{7, 3}) == 2);
}
