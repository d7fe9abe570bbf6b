#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hsp/rings.hpp"
#include "oracles.hpp"

using namespace hsp;

TEST_CASE("linear fields have vanishing ring integrals") {
  const ScalarField u = linear_field(3, 0.7);
  const HalfSpacePoint x{0, 0, 1};
  for (double R : {4.0, 32.0}) {
    CHECK(ring_plus_integral(u, 0.7, x, R) == 0);
    CHECK(ball_limit_integral(u, 0.7, x, R) == 0);
  }
}

TEST_CASE("green ring of the constant 1 is 1") {
  const ScalarField one = constant_field(2, 1);
  for (double R : {8.0, 16.0}) CHECK(green_ring_integral(one, HalfSpacePoint{0, 1}, R) == doctest::Approx(1).epsilon(1e-6));
}

TEST_CASE("green ring of y_N against box-rejection Monte Carlo") {
  // N = 2, x = (0,1), R = 8. The outer level set {G > 1/16} is the disc with
  // |y - xbar| / |y - x| > k, k = exp(2 pi / 16); sample its bounding box.
  const double R = 8, k = std::exp(2 * std::numbers::pi / (2 * R));
  const double c = (k * k + 1) / (k * k - 1), rad = 2 * k / (k * k - 1);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(-rad, rad), uy(c - rad, c + rad);
  const int m = 2'000'000;
  double s = 0, s2 = 0;
  for (int i = 0; i < m; ++i) {
    const std::vector<double> y = {ux(rng), uy(rng)};
    double f = 0;
    if (y[1] > 0) {
      const double g = oracle::green({0, 1}, y);
      if (g > 0.5 / R && g < 1 / R) {
        // |grad_y G|^2 for G = (1/2pi) ln(|y - xbar| / |y - x|)
        const double r2 = y[0] * y[0] + (y[1] - 1) * (y[1] - 1), m2 = y[0] * y[0] + (y[1] + 1) * (y[1] + 1);
        const double gx = (y[0] / m2 - y[0] / r2) / (2 * std::numbers::pi);
        const double gy = ((y[1] + 1) / m2 - (y[1] - 1) / r2) / (2 * std::numbers::pi);
        f = (gx * gx + gy * gy) / g * y[1];
      }
    }
    s += f;
    s2 += f * f;
  }
  const double area = 4 * rad * rad;
  const double mean = s / m, sd = std::sqrt((s2 / m - mean * mean) / m);
  const double mc = area * mean / std::numbers::ln2, err = area * sd / std::numbers::ln2;
  const double v = green_ring_integral(linear_field(2, 1), HalfSpacePoint{0, 1}, R);
  CHECK(std::abs(v - mc) < 4 * err);
  CHECK(err < 0.01 * v);
}

TEST_CASE("scan verdicts") {
  const HalfSpacePoint x{0, 0, 1};
  ScanOptions opt;
  opt.levels = 8;
  const RingScanReport lin = scan(linear_field(3, 2), 2, x, RingCondition::ring_plus, opt);
  CHECK(lin.verdict == Verdict::satisfied);
  const RingScanReport one = scan(constant_field(3, 1), 0, x, RingCondition::ring_plus_zero, opt);
  CHECK(one.fitted_slope == doctest::Approx(-1).epsilon(0.05));
  const RingScanReport cls = scan(constant_field(3, 1), 0, x, RingCondition::classical, opt);
  CHECK(cls.verdict == Verdict::not_satisfied);
  CHECK(std::abs(cls.fitted_slope) < 0.1);
}

TEST_CASE("condition names") {
  for (const char* s : {"r", "r-plus", "r-plus-0", "ball-limit", "green-ring", "ring-d"})
    CHECK(to_string(parse_condition(s)) == s);
  CHECK_THROWS(parse_condition("R++"));
}
