#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hsp/cubature.hpp"

using namespace hsp;

TEST_CASE("smooth gaussian over a square") {
  Piece p{Box(Coords{-3, -3}, Coords{3, 3}), [](std::span<const double> y) { return std::exp(-y[0] * y[0] - y[1] * y[1]); }};
  CubatureOptions o;
  o.rel_tol = 1e-10;
  const CubatureResult r = integrate(p, o);
  const double exact = std::numbers::pi * std::pow(std::erf(3.0), 2);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("1/|y| with a corner-free interior singularity") {
  // \int_{[-1,1]^2} 1/|y| = 8 asinh(1)
  Piece p{Box(Coords{-1, -1}, Coords{1, 1}), [](std::span<const double> y) { return 1 / std::hypot(y[0], y[1]); },
          {Coords{0, 0}}};
  CubatureOptions o;
  o.rel_tol = 1e-8;
  const CubatureResult r = integrate(p, o);
  CHECK(r.value == doctest::Approx(8 * std::asinh(1.0)).epsilon(1e-7));
}

TEST_CASE("one-dimensional pieces use Gauss-Kronrod") {
  Piece p{Box(Coords{0}, Coords{1}), [](std::span<const double> y) { return std::sqrt(y[0]); }, {Coords{0}}};
  CubatureOptions o;
  o.rel_tol = 1e-10;
  CHECK(integrate(p, o).value == doctest::Approx(2.0 / 3).epsilon(1e-9));
}

TEST_CASE("breaks and singular isolation preserve the integral") {
  Piece p{Box(Coords{0, 0, 0}, Coords{1, 2, 1}), [](std::span<const double> y) { return y[0] * y[1] + y[2]; }};
  p.breaks = {{1, 0.5}, {0, 0.25}};
  p.singular = {Coords{0.5, 1, 0.5}};
  const double exact = 0.5 * 2 + 2 * 0.5;  // \int xy = (1/2)(2), \int z = 2 * 1/2
  CHECK(integrate(p, {}).value == doctest::Approx(exact).epsilon(1e-10));
  Piece one = p;
  one.f = [](std::span<const double>) { return 1.0; };
  const auto parts = isolate_singularities(one, {});
  CHECK(parts.size() > 1);
  CHECK(integrate(std::span<const Piece>(parts), {}).value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("serial and parallel agree bitwise") {
  Piece p{Box(Coords{-1, -1, 0}, Coords{1, 1, 1}),
          [](std::span<const double> y) { return std::cos(3 * y[0]) / (0.01 + y[1] * y[1] + y[2]); },
          {Coords{0, 0, 0}}};
  CubatureOptions a, b;
  a.exec = Execution::serial;
  b.exec = Execution::parallel;
  const CubatureResult ra = integrate(p, a), rb = integrate(p, b);
  CHECK(ra.value == rb.value);
  CHECK(ra.evaluations == rb.evaluations);
}

TEST_CASE("L1-relative tolerance terminates on cancelling integrands") {
  Piece p{Box(Coords{-1, 0}, Coords{1, 1}), [](std::span<const double> y) { return y[0] * std::exp(y[1]); }};
  CubatureOptions o;
  o.l1_fraction = 1;
  const CubatureResult r = integrate(p, o);
  CHECK(r.converged);
  CHECK(std::abs(r.value) < 1e-12);
  CHECK(r.l1 == doctest::Approx(std::exp(1.0) - 1).epsilon(0.05));  // coarse estimate
}
