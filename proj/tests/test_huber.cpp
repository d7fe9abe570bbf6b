#include <doctest.h>

#include <cmath>

#include "hsp/corpus.hpp"
#include "hsp/huber.hpp"
#include "hsp/potentials.hpp"

using namespace hsp;

TEST_CASE("lift and unlift") {
  const ScalarField u = expression_field("x1*x2 + x2^2", 2);
  const LiftedField v = lift(u);
  // v(xi', bar xi) = u(xi', |bar xi|) / |bar xi|
  const LiftedPoint xi = lifted_point(std::vector<double>{0.5}, 0.3, 0.4, 1.2);
  const double r = std::sqrt(0.09 + 0.16 + 1.44);
  CHECK(v(xi) == doctest::Approx((0.5 * r + r * r) / r).epsilon(1e-14));
  const ScalarField w = unlift(v);
  CHECK(w(HalfSpacePoint{0.7, 1.3}) == doctest::Approx(u(HalfSpacePoint{0.7, 1.3})).epsilon(1e-14));
  CHECK(lift(linear_field(2, 3))(lifted_point(std::vector<double>{1.0}, 0, 0, 0)) == 3);
}

TEST_CASE("spherical means of a lifted harmonic function reproduce the centre") {
  // x_N x_1 lifts to xi_1, which is harmonic on R^{N+2}
  const LiftedField v = lift(expression_field("x1*x2", 2));
  const LiftedPoint c = lifted_point(std::vector<double>{0.4}, 1.0, 0.5, -0.2);
  const SphericalMean m = spherical_mean(v, c, 0.7);
  CHECK(std::abs(m.mean - v(c)) <= m.tol + 1e-12);
}

TEST_CASE("super-mean-value property of a lifted Green potential") {
  RepresentationTriple t = RepresentationTriple::zero(2);
  t.mu = dirac(HalfSpacePoint{0, 1});
  const LiftedField v = lift(represent(t));
  for (double r : {0.2, 1.0, 3.0}) {
    const LiftedPoint c = lifted_point(std::vector<double>{0.5}, 2.0, 0.3, 0.0);
    const SphericalMean m = spherical_mean(v, c, r);
    CHECK(m.mean <= v(c) + m.tol);
  }
}

TEST_CASE("annulus inequalities and their preconditions") {
  const HalfSpacePoint x{0, 1};
  CHECK_FALSE(annulus_comparison_applies(x, 1.5, 0.5));
  CHECK(annulus_comparison_applies(x, 4, 0.5));
  CHECK_FALSE(annulus_split_applies(x, 4, 0.8));
  CHECK(annulus_split_applies(x, 8, 0.8));
  const ScalarField g = find_entry("green-delta").make(2);
  CHECK(annulus_comparison(g, 0, x, 4, 0.5).holds);
  CHECK(annulus_split_bound(constant_field(2, 1), x, 6, 0.75).holds);
}
