#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "hsp/kernels.hpp"
#include "hsp/potentials.hpp"
#include "oracles.hpp"

using namespace hsp;
using nlohmann::json;

namespace {
BoundaryMeasure bmeasure(int n, const json& density) {
  return std::get<BoundaryMeasure>(load_measure(json{{"dim", n}, {"side", "boundary"}, {"density", density}}));
}
}  // namespace

TEST_CASE("Poisson integral of exp(-t^2) is the Voigt profile") {
  const BoundaryMeasure g = bmeasure(2, {{"name", "gauss"}});
  for (auto [x, y] : {std::pair{0.0, 1.0}, {0.3, 0.05}, {-1.7, 2.5}, {0.4, 1e-3}, {6.0, 0.5}})
    CHECK(poisson_integral(g, HalfSpacePoint{x, y}) == doctest::Approx(oracle::voigt(x, y)).epsilon(1e-6));
}

TEST_CASE("Poisson integral of Lebesgue measure is 1") {
  for (int n : {2, 3}) {
    const BoundaryMeasure leb = bmeasure(n, {{"name", "constant"}});
    Coords c(n);
    c[0] = 0.7;
    c[n - 1] = 0.2;
    CHECK(poisson_integral(leb, HalfSpacePoint(c)) == doctest::Approx(1).epsilon(1e-6));
  }
}

TEST_CASE("Green potential of a uniform box against tensor Gauss-Legendre") {
  const auto box = std::get<InteriorMeasure>(
      load_measure(json::parse(R"({"dim":2,"density":{"name":"uniform_box","params":{"lo":[1,0.5],"hi":[2,1.5]}}})")));
  using GL = boost::math::quadrature::gauss<double, 30>;
  const double ref = GL::integrate(
      [](double a) {
        return GL::integrate([a](double b) { return oracle::green({0, 1}, {a, b}); }, 0.5, 1.5);
      },
      1.0, 2.0);
  CHECK(green_potential(box, HalfSpacePoint{0, 1}) == doctest::Approx(ref).epsilon(1e-7));
}

TEST_CASE("representation of a Dirac mass") {
  RepresentationTriple t = RepresentationTriple::zero(3, 0.5);
  t.mu = dirac(HalfSpacePoint{0, 0, 1}, 2);
  const ScalarField u = represent(t);
  CHECK(u(HalfSpacePoint{0.3, 0.1, 2}) ==
        doctest::Approx(0.5 * 2 + 2 * oracle::green({0.3, 0.1, 2}, {0, 0, 1})).epsilon(1e-13));
  CHECK(std::isinf(u(HalfSpacePoint{0, 0, 1})));
  const SlopeEstimate h = estimate_h(u, 8);
  CHECK(h.h == doctest::Approx(0.5).epsilon(1e-2));
  const LowerBound lb = lower_bound_check(u, t, nested_cloud(3, 5, 16, 3));
  CHECK(lb.holds);
  CHECK(lb.c0 > 0);
}

TEST_CASE("admissibility") {
  RepresentationTriple t = RepresentationTriple::zero(2);
  t.mu = dirac(HalfSpacePoint{0, 1});
  CHECK_NOTHROW(check_admissible(t));
  t.nu = BoundaryMeasure::zero(3);
  CHECK_THROWS_AS(check_admissible(t), MeasureError);
  t.nu = BoundaryMeasure::zero(2);
  t.h = std::nan("");
  CHECK_THROWS_AS(check_admissible(t), MeasureError);
}
