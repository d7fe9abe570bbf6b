#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hsp/estimates.hpp"
#include "hsp/kernels.hpp"
#include "oracles.hpp"

using namespace hsp;

TEST_CASE("green matches the image-charge closed form") {
  CHECK(green(HalfSpacePoint{0, 1}, HalfSpacePoint{0, 2}) == doctest::Approx(std::log(3.0) / (2 * std::numbers::pi)).epsilon(1e-14));
  const std::vector<std::vector<double>> xs = {{0.3, 1.2}, {-2, 0.01}, {0.1, 0.2, 0.3}, {1, -1, 2, 0.5}, {0, 0, 0, 0, 3}};
  const std::vector<std::vector<double>> ys = {{1.1, 0.4}, {3, 7}, {0.4, -0.3, 2}, {0, 0, 0, 1}, {1, 2, 3, 4, 5}};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const HalfSpacePoint x(Coords(std::span<const double>(xs[i]))), y(Coords(std::span<const double>(ys[i])));
    CHECK(green(x, y) == doctest::Approx(oracle::green(xs[i], ys[i])).epsilon(1e-12));
  }
}

TEST_CASE("poisson kernel closed form and N = 3 constant") {
  CHECK(poisson(HalfSpacePoint{0, 0, 1}, Coords{0, 0}) == doctest::Approx(1 / (2 * std::numbers::pi)).epsilon(1e-14));
  const std::vector<double> x = {0.2, -0.1, 0.4, 0.7};
  CHECK(poisson(HalfSpacePoint{0.2, -0.1, 0.4, 0.7}, Coords{1, 2, -1}) ==
        doctest::Approx(oracle::poisson(x, {1, 2, -1})).epsilon(1e-12));
}

TEST_CASE("constants") {
  for (int n = 2; n <= 8; ++n) CHECK(sphere_measure(n) == doctest::Approx(oracle::sphere_area(n)).epsilon(1e-14));
}

TEST_CASE("coincident points throw without regularization") {
  CHECK_THROWS_AS(green(HalfSpacePoint{0, 1}, HalfSpacePoint{0, 1}), CoincidentPoints);
  CHECK_NOTHROW(green(HalfSpacePoint{0, 1}, HalfSpacePoint{0, 1}, Regularization(0.1)));
}

TEST_CASE("regularized green is symmetric and nonincreasing in eps") {
  const HalfSpacePoint x{0.3, 0.4, 1.1}, y{-0.2, 0.5, 0.9};
  double prev = green(x, y);
  for (double e : {1e-3, 1e-2, 1e-1, 0.5}) {
    const double g = green(x, y, Regularization(e));
    CHECK(g == doctest::Approx(green(y, x, Regularization(e))).epsilon(1e-13));
    CHECK(g <= prev);
    prev = g;
  }
}

TEST_CASE("gradient of green against central differences of the closed form") {
  const std::vector<double> xv = {0.3, 0.8, 1.1}, yv = {-0.4, 0.1, 0.6};
  const Coords g = grad_green(HalfSpacePoint{0.3, 0.8, 1.1}, HalfSpacePoint{-0.4, 0.1, 0.6});
  const double h = 1e-5;
  for (int i = 0; i < 3; ++i) {
    std::vector<double> yp = yv, ym = yv;
    yp[i] += h;
    ym[i] -= h;
    const double fd = (oracle::green(xv, yp) - oracle::green(xv, ym)) / (2 * h);
    CHECK(g[i] == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("level rings") {
  const HalfSpacePoint x{0, 1};
  // G^x(y) = 1/R exactly on an Apollonius circle; check both sides of it.
  const double R = 8, k = std::exp(2 * std::numbers::pi / R);
  const double top = (k * k + 1) / (k * k - 1) + 2 * k / (k * k - 1);  // highest point of {G = 1/R}
  CHECK(in_level_ring(x, HalfSpacePoint{0, top * 0.999}, R).in_inner);
  CHECK_FALSE(in_level_ring(x, HalfSpacePoint{0, top * 1.001}, R).in_inner);
  CHECK(in_level_ring(x, HalfSpacePoint{0, top * 1.001}, R).in_ring());
  CHECK(in_level_ring(x, x, R).in_inner);
}

TEST_CASE("audit battery on a small sample") {
  const AuditReport a = estimates_audit(3, 200, 11);
  CHECK(a.symmetry_violations == 0);
  CHECK(a.monotone_violations == 0);
  CHECK(a.gradient_violations == 0);
  for (const BoundCheck& b : a.bounds)
    if (b.name != "grad2_below") CHECK_MESSAGE(b.violations == 0, b.name);
}
