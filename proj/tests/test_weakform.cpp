#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hsp/potentials.hpp"
#include "hsp/weakform.hpp"

using namespace hsp;

TEST_CASE("cut-off values and derivatives") {
  CHECK(cutoff(0.3) == 1);
  CHECK(cutoff(1.0) == 1);
  CHECK(cutoff(2.0) == 0);
  CHECK(cutoff(1.5) == doctest::Approx(0.5));
  const double h = 1e-5;
  for (double t : {0.9, 1.1, 1.37, 1.5, 1.81, 1.99, 2.2}) {
    CHECK(cutoff_d1(t) == doctest::Approx((cutoff(t + h) - cutoff(t - h)) / (2 * h)).epsilon(1e-6).scale(1));
    CHECK(cutoff_d2(t) == doctest::Approx((cutoff_d1(t + h) - cutoff_d1(t - h)) / (2 * h)).epsilon(1e-6).scale(1));
  }
  // C^2 at the joins
  CHECK(std::abs(cutoff_d1(1 + 1e-9)) < 1e-12);
  CHECK(std::abs(cutoff_d2(2 - 1e-9)) < 1e-6);
}

TEST_CASE("test-function Laplacian against finite differences") {
  Profile p;
  p.kind = Profile::Kind::gauss_bump;
  p.center = Coords{0.2, -0.1};
  p.width = 0.9;
  p.gauss = 0.45;
  const TestFunction t = make_test_function(p, 0.7);
  const HalfSpacePoint x{0.35, 0.1, 0.9};
  const double h = 1e-3;
  double fd = 0;
  for (int i = 0; i < 3; ++i) {
    HalfSpacePoint a = x, b = x;
    a[i] += h;
    b[i] -= h;
    fd += (t.phi(a) - 2 * t.phi(x) + t.phi(b)) / (h * h);
  }
  CHECK(t.laplacian(x) == doctest::Approx(fd).epsilon(1e-5));
  CHECK(t.phi(HalfSpacePoint{0.2, -0.1, 0.0}) == 0);
  CHECK(t.normal_derivative(Coords{0.2, -0.1}) == doctest::Approx(p(Coords{0.2, -0.1})));
}

TEST_CASE("battery") {
  const auto b = standard_battery(3);
  CHECK(b.size() == 10);
  for (const TestFunction& t : b) CHECK(t.dim == 3);
}

TEST_CASE("weak residual of a Dirac representation in N = 2") {
  RepresentationTriple t = RepresentationTriple::zero(2, 0.3);
  t.mu = dirac(HalfSpacePoint{0, 1});
  const ScalarField u = represent(t);
  const WeakResidualReport r = weak_residual(u, t.mu, t.nu, standard_battery(2));
  CHECK(r.rows.size() == 10);
  CHECK(r.max_residual < 1e-5);
  // a superharmonic u satisfies the inequality form; -u does not
  CHECK(weak_residual(u, t.mu, t.nu, standard_battery(2), {}, WeakMode::inequality).max_residual < 1e-5);
}

TEST_CASE("trace of x_N vanishes") {
  Profile p;
  p.center = Coords{0.0};
  const TraceReport r = lim_trace(linear_field(2, 1), p);
  CHECK(std::abs(r.limit) < 1e-8);
  CHECK_FALSE(r.diverges);
}

TEST_CASE("mollifier is normalized") {
  const double total = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(mollifier, -1.0, 1.0, 15, 1e-13);
  CHECK(total == doctest::Approx(1).epsilon(1e-10));
  CHECK(mollifier(1.0) == 0);
  CHECK(mollifier(-1.5) == 0);
}

TEST_CASE("counterexample bounds with an off-centre profile") {
  // The mollifier sits at x' = 0; an off-centre psi sees both slopes of it.
  Profile p;
  p.center = Coords{0.25};
  p.width = 0.8;
  const auto rows = counterexample_bounds(p, default_ladder());
  for (const CounterexampleRow& r : rows) {
    CHECK(r.holds);
    if (r.eps <= 1e-2) CHECK(r.holds_plus);
  }
  CHECK(rows.back().pairing_v_plus == doctest::Approx(p(Coords{0.0})).epsilon(1e-2));
}

TEST_CASE("Green's identity on an interior box") {
  RepresentationTriple t = RepresentationTriple::zero(2);
  t.mu = dirac(HalfSpacePoint{0.2, 1});
  const ScalarField g = represent(t);
  const Box b(Coords{-1, 0.5}, Coords{1, 2});
  const PartsIdentity pi = interior_parts_identity(g, t.mu, b, box_test_function(b));
  CHECK(pi.residual < 1e-6);
  // the test function at the atom: (x+1)(1-x)(y-1/2)(2-y) at (0.2, 1)
  CHECK(pi.measure == doctest::Approx(1.2 * 0.8 * 0.5 * 1.0));
}
