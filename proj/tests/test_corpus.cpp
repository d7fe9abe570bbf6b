#include <doctest.h>

#include <set>

#include "hsp/corpus.hpp"

using namespace hsp;

TEST_CASE("registry") {
  std::set<std::string> names;
  for (const CorpusEntry& e : registry()) {
    CHECK(names.insert(e.name).second);
    CHECK_FALSE(e.expected.empty());
  }
  CHECK(names.count("unotl1c") == 1);
  CHECK_THROWS_AS(find_entry("no-such-field"), std::invalid_argument);
  CHECK(registry_json().size() == registry().size());
}

TEST_CASE("finite-difference harmonicity is second order") {
  const ScalarField u = expression_field("x1^3 - 3*x1*x2^2 + x2", 2);
  CHECK(fd_harmonic_residual(u, 1e-2) < 1e-9);
  const ScalarField w = expression_field("exp(x1)*sin(x2)", 2);
  const double a = fd_harmonic_residual(w, 4e-2), b = fd_harmonic_residual(w, 2e-2);
  CHECK(b / a == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("boundary L1 integral of a bounded field converges") {
  const ScalarField u = constant_field(2, 1);
  // B*_1(0) minus the disc of radius delta: 2 - pi delta^2 / 2
  CHECK(boundary_local_l1(u, 0.1) == doctest::Approx(2 - 3.14159265358979 * 0.01 / 2).epsilon(1e-6));
}

TEST_CASE("a selected entry runs and reports in registry order") {
  const auto rows = run_corpus(2, {}, {"linear", "constant"});
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].entry == "linear");
  for (const SuiteOutcome& o : rows) CHECK(o.passed);
  CHECK(to_csv(rows).rfind("entry,dim,suite,expected,observed,passed,value,slope\n", 0) == 0);
}
