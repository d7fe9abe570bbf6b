#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsp/cubature.hpp"
#include "hsp/field.hpp"
#include "hsp/measures.hpp"
#include "hsp/quadrature.hpp"

namespace hsp {

/// Boundary profile psi on R^{N-1}: radial, compactly supported in the ball
/// |x' - center| < width.
struct Profile {
  enum class Kind { bump, gauss_bump };
  Kind kind = Kind::bump;
  Coords center;       // length N-1
  double width = 1;    // support radius
  double gauss = 0.5;  // gauss_bump: exp(-r^2/gauss^2) factor

  double operator()(const Coords& yp) const;
  /// value, gradient, Laplacian at yp
  double derivs(const Coords& yp, Coords& grad, double& lap) const;
  double sup_gradient() const;  // ||grad psi||_inf
  Box support() const;
};

/// A test function phi in D_0: phi(x', 0) = 0, compact support in the
/// closed half-space, with analytic Laplacian.
struct TestFunction {
  int dim = 0;
  std::string name;
  std::function<double(const HalfSpacePoint&)> phi;
  std::function<Coords(const HalfSpacePoint&)> grad;
  std::function<double(const HalfSpacePoint&)> laplacian;
  /// d phi / d x_N at (y', 0)
  std::function<double(const Coords&)> normal_derivative;
  Box support;
  std::optional<Profile> profile;
};

/// Smooth cut-off: 1 on [0,1], 0 on [2,inf), C^3 septic transition.
double cutoff(double t);
double cutoff_d1(double t);
double cutoff_d2(double t);

/// phi(x', x_N) = x_N psi(x') chi(x_N / scale).
TestFunction make_test_function(const Profile& psi, double scale);
/// phi = prod_i (x_i - lo_i)(hi_i - x_i) on an interior box; vanishes on its faces.
TestFunction box_test_function(const Box& box);
/// The fixed 10-function battery: 5 profiles x cut-off scales {0.5, 1}.
std::vector<TestFunction> standard_battery(int n);
inline constexpr int kBatteryVersion = 1;

enum class WeakMode { equality, inequality };

struct WeakResidualRow {
  std::string name;
  double lhs = 0;       // \int u (-Laplacian phi)
  double rhs_mu = 0;    // \int phi dmu
  double rhs_nu = 0;    // \int phi_N(., 0) dnu
  double scale = 0;
  double residual = 0;  // |lhs - rhs| / scale (inequality: max(rhs - lhs, 0) / scale)
};

struct WeakResidualReport {
  WeakMode mode = WeakMode::equality;
  std::vector<WeakResidualRow> rows;
  double max_residual = 0;
};

WeakResidualReport weak_residual(const ScalarField& u, const InteriorMeasure& mu, const BoundaryMeasure& nu,
                                 const std::vector<TestFunction>& tests, const QuadratureSpec& q = {},
                                 WeakMode mode = WeakMode::equality);

/// \int phi dmu and \int psi dnu (exposed for the trace target).
double pair_interior(const InteriorMeasure& mu, const TestFunction& t, const QuadratureSpec& q = {});
double pair_boundary(const BoundaryMeasure& nu, const std::function<double(const Coords&)>& psi, const Box& support,
                     const QuadratureSpec& q = {});

std::vector<double> default_ladder();

struct TraceReport {
  Profile psi;
  std::vector<double> eps, values;
  double limit = 0;
  double error = 0;
  bool diverges = false;
  std::optional<double> target;
};

/// T_eps = \int psi(x') u(x', eps) dx' on a decreasing ladder, with linear
/// Richardson extrapolation and a divergence flag (|T| growing
/// monotonically by 10x or more).
TraceReport lim_trace(const ScalarField& u, const Profile& psi, const std::vector<double>& ladder = default_ladder(),
                      const QuadratureSpec& q = {});

/// Normalized standard mollifier m_1 on (-1, 1); m_eps(t) = m_1(t/eps)/eps.
double mollifier(double s);

struct CounterexampleRow {
  double eps = 0;
  double pairing = 0, bound = 0;             // |\int u psi| <= 2 sqrt(eps) ||psi'||
  double pairing_plus = 0, lower = 0;        // \int u^+ psi >= psi(0) / (4 sqrt(eps))
  double pairing_v = 0, pairing_v_plus = 0;  // \int v psi -> 0, \int v^+ psi -> psi(0)
  bool holds = false, holds_plus = false;
};
/// Pairings of the N = 2 sign-changing family against psi on the ladder.
std::vector<CounterexampleRow> counterexample_bounds(const Profile& psi, const std::vector<double>& ladder,
                                                     const QuadratureSpec& q = {});

struct PartsIdentity {
  double boundary = 0;  // \int_{dOmega} u grad phi . n
  double volume = 0;    // \int_Omega u Laplacian phi
  double measure = 0;   // \int_Omega phi dmu
  double residual = 0;
};
/// Green's identity on an interior box for mu = -Laplacian u:
/// \int_{dOmega} u d_n phi = \int_Omega u Laplacian phi + \int_Omega phi dmu.
PartsIdentity interior_parts_identity(const ScalarField& u, const InteriorMeasure& mu, const Box& box,
                                      const TestFunction& phi, const QuadratureSpec& q = {});

std::string to_csv(const WeakResidualReport& r);
nlohmann::json to_json(const WeakResidualReport& r);
std::string to_csv(const TraceReport& r);
nlohmann::json to_json(const TraceReport& r);

}  // namespace hsp
