#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsp/field.hpp"
#include "hsp/quadrature.hpp"

namespace hsp {

/// One machine-checkable expectation about a corpus field.
///
/// Suites:
///   r-plus-0, r-plus, r      ring scan at e_N, verdict satisfied / not-satisfied
///   fd-harmonic              centred-difference Laplacian is O(step^2)
///   fd-superharmonic         -Laplacian >= 0 (and matches the closed form, if any)
///   boundary-l1              \int_{B*_1(0) \ {|x| < delta}} |u| keeps growing as delta -> 0
///   trace                    lim-trace against the unit bump: converges (to `target`) or diverges
///   lift                     lift(u) is identically `h` off the boundary
struct Expectation {
  std::string suite;
  std::string expected;
  std::string claim;  // the property that predicts the verdict
  double h = 0;
  int levels = 8;
  std::optional<double> target;
  std::vector<int> dims;  // restrict to these N; empty: every dimension of the entry
};

struct CorpusEntry {
  std::string name;
  std::string formula;
  std::vector<int> dims;  // empty: any N in [2, kMaxDim]
  std::function<ScalarField(int n)> make;
  std::vector<Expectation> expected;
  bool nonnegative_superharmonic = false;  // eligible for the lifted mean-value suite
  std::function<double(const HalfSpacePoint&)> neg_laplacian;  // closed form, if known

  bool supports(int n) const;
};

const std::vector<CorpusEntry>& registry();
/// Throws std::invalid_argument for unknown names.
const CorpusEntry& find_entry(const std::string& name);
nlohmann::json registry_json();

/// Centred-difference harmonicity residual max |Laplacian_step u| over seeded
/// sample points in B*_2(e_N) with heights >= 0.25.
double fd_harmonic_residual(const ScalarField& u, double step, std::uint64_t seed = 1);

/// \int over B*_1(0) minus the Euclidean ball |x| < delta of |u|.
double boundary_local_l1(const ScalarField& u, double delta, const QuadratureSpec& q = {});

struct SuiteOutcome {
  std::string entry, suite, expected, observed, claim;
  int dim = 0;
  bool passed = false;
  double value = 0;  // min ring value, residual, limit, growth ...
  double slope = 0;  // fitted slope for ring suites, NaN otherwise
};

/// Run every expectation of `entry` that applies in dimension n.
std::vector<SuiteOutcome> run_entry(const CorpusEntry& entry, int n, const QuadratureSpec& q = {});
/// The whole registry (or the named entries) in registry order.
std::vector<SuiteOutcome> run_corpus(int n, const QuadratureSpec& q = {}, const std::vector<std::string>& only = {});

std::string to_csv(const std::vector<SuiteOutcome>& rows);
nlohmann::json to_json(const std::vector<SuiteOutcome>& rows);

}  // namespace hsp
