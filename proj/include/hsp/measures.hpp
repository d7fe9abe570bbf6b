#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hsp/cubature.hpp"
#include "hsp/point.hpp"
#include "hsp/quadrature.hpp"

namespace hsp {

enum class Side { interior, boundary };

class MeasureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Radial bound |f(y)| <= env(|y|) used for tail truncation.
struct Envelope {
  enum class Kind { compact, power, gaussian };
  Kind kind = Kind::compact;
  double amp = 1;       // constant C
  double radius = 0;    // compact: support radius; gaussian: centre offset c
  double exponent = 0;  // power: p in C (1 + r)^{-p}
  double scale = 1;     // gaussian: s in C exp(-((r - c)_+ / s)^2)

  double operator()(double r) const;
  /// Bound on \int_R^\infty env(r) r^k dr for k in {0, -2}; +inf if divergent.
  double tail(double R, int k) const;
};

/// A closed-form density over R^d (d = N for interior, N - 1 for boundary).
struct Density {
  std::string name;         // gauss | uniform_box | bump | constant | expression
  nlohmann::json document;  // normalized spec, all defaults filled in
  std::function<double(const Coords&)> f;
  std::optional<Box> support;  // compact support box, if any
  Envelope envelope;
  std::vector<Coords> peaks;

  double operator()(const Coords& y) const { return f(y); }
};

struct Atom {
  Coords loc;
  double w = 0;
};

/// Nonnegative measure: atoms with w >= 0 plus nonnegative densities.
struct MeasurePart {
  std::vector<Atom> atoms;
  std::vector<Density> densities;

  bool empty() const { return atoms.empty() && densities.empty(); }
};

template <Side S>
struct Measure {
  static constexpr Side side = S;
  int dim = 0;  // half-space dimension N
  bool is_signed = false;
  MeasurePart positive, negative;

  int coord_dim() const { return S == Side::interior ? dim : dim - 1; }
  bool empty() const { return positive.empty() && negative.empty(); }

  static Measure zero(int n) {
    Measure m;
    m.dim = n;
    return m;
  }
};

using InteriorMeasure = Measure<Side::interior>;
using BoundaryMeasure = Measure<Side::boundary>;
using AnyMeasure = std::variant<InteriorMeasure, BoundaryMeasure>;

/// Parse and validate a measure document. `allow_signed` = false rejects
/// negative weights and densities ("positive-only context").
AnyMeasure load_measure(const nlohmann::json& doc, bool allow_signed = true);
AnyMeasure load_measure_file(const std::string& path, bool allow_signed = true);
nlohmann::json serialize(const InteriorMeasure& m);
nlohmann::json serialize(const BoundaryMeasure& m);

/// Convenience builders used by the corpus and tests.
InteriorMeasure dirac(const HalfSpacePoint& at, double w = 1.0);
BoundaryMeasure boundary_dirac(const BoundaryPoint& at, double w = 1.0);
Density named_density(const std::string& name, int coord_dim, Side side, const nlohmann::json& params = {});
template <Side S>
Measure<S> density_measure(int n, Density d) {
  Measure<S> m = Measure<S>::zero(n);
  m.positive.densities.push_back(std::move(d));
  return m;
}

/// Sum_{atoms in region} y_N |w| + \int_region y_N |density|.
double weighted_mass(const InteriorMeasure& mu, const CylinderBall& region, const QuadratureSpec& q = {});

/// \int y_N/(1+|y|^N) d|mu| (interior) or \int 1/(1+|y'|^N) d|nu| (boundary);
/// +inf when the declared decay does not make the tail finite.
double total_decay_functional(const InteriorMeasure& mu, const QuadratureSpec& q = {});
double total_decay_functional(const BoundaryMeasure& nu, const QuadratureSpec& q = {});

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace hsp
