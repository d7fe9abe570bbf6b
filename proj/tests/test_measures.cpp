#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hsp/point.hpp"
#include "hsp/measures.hpp"

using namespace hsp;
using nlohmann::json;

namespace {
InteriorMeasure interior(const char* text) { return std::get<InteriorMeasure>(load_measure(json::parse(text))); }
BoundaryMeasure boundary(const char* text) { return std::get<BoundaryMeasure>(load_measure(json::parse(text))); }
}  // namespace

TEST_CASE("side is read from the document") {
  CHECK(std::holds_alternative<InteriorMeasure>(load_measure(json::parse(R"({"dim":2,"atoms":[{"loc":[0,1],"w":1}]})"))));
  CHECK(std::holds_alternative<BoundaryMeasure>(
      load_measure(json::parse(R"({"dim":2,"side":"boundary","density":{"name":"gauss"}})"))));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(interior(R"({"dim":2,"atoms":[{"loc":[0,0],"w":1}]})"), MeasureError);
  CHECK_THROWS_AS(interior(R"({"dim":2,"atoms":[{"loc":[0,1,2],"w":1}]})"), MeasureError);
  CHECK_THROWS_AS(interior(R"({"dim":2,"mode":"positive","atoms":[{"loc":[0,1],"w":-1}]})"), MeasureError);
  CHECK_THROWS_AS(interior(R"({"dim":9,"atoms":[]})"), MeasureError);
  CHECK_THROWS_AS(interior(R"({"dim":2,"density":{"name":"nope"}})"), MeasureError);
  CHECK_THROWS_AS(load_measure(json::parse(R"({"dim":2,"side":"sideways"})")), MeasureError);
  const InteriorMeasure s = interior(R"({"dim":2,"atoms":[{"loc":[0,1],"w":-2}]})");
  CHECK(s.is_signed);
  CHECK(s.negative.atoms.size() == 1);
  CHECK(s.negative.atoms[0].w == 2);
}

TEST_CASE("serialization round-trips") {
  const InteriorMeasure m =
      interior(R"({"dim":3,"atoms":[{"loc":[0,0,1],"w":2}],"density":{"name":"gauss","params":{"center":[0,0,2]}}})");
  const json once = serialize(m);
  CHECK(serialize(std::get<InteriorMeasure>(load_measure(once))) == once);
}

TEST_CASE("weighted mass") {
  const InteriorMeasure a = interior(R"({"dim":2,"atoms":[{"loc":[0,2],"w":3}]})");
  CHECK(weighted_mass(a, CylinderBall(HalfSpacePoint{0, 1}, 5)) == doctest::Approx(6));
  CHECK(weighted_mass(a, CylinderBall(HalfSpacePoint{3, 1}, 1)) == 0);
  // unit cube, cylinder of radius 1/2 about its centre: (pi/4) * \int_0^1 y dy
  const InteriorMeasure cube =
      interior(R"({"dim":3,"density":{"name":"uniform_box","params":{"lo":[0,0,0],"hi":[1,1,1]}}})");
  CHECK(weighted_mass(cube, CylinderBall(HalfSpacePoint{0.5, 0.5, 0.5}, 0.5)) ==
        doctest::Approx(std::numbers::pi / 8).epsilon(1e-6));
}

TEST_CASE("total decay functional") {
  // atom at (0,1): y_N/(1+|y|^2) = 1/2
  CHECK(total_decay_functional(interior(R"({"dim":2,"atoms":[{"loc":[0,1],"w":1}]})")) == doctest::Approx(0.5));
  // Lebesgue on the line: \int 1/(1+t^2) = pi
  CHECK(total_decay_functional(boundary(R"({"dim":2,"side":"boundary","density":{"name":"constant"}})")) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-5));
  // constant interior density: \int y_N/(1+|y|^2) diverges
  CHECK(std::isinf(total_decay_functional(interior(R"({"dim":2,"density":{"name":"constant"}})"))));
}
