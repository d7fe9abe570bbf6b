#pragma once

#include <functional>

#include "hsp/field.hpp"
#include "hsp/quadrature.hpp"

namespace hsp {

/// xi = (xi', bar xi) in R^{N+2}, stored as N-1 tangential coordinates
/// followed by the three coordinates of bar xi.
using LiftedPoint = Coords;

LiftedPoint lifted_point(std::span<const double> tangential, double b1, double b2, double b3);

struct LiftedField {
  int dim = 0;  // N of the underlying half-space; the field lives on R^{N+2}
  std::function<double(const LiftedPoint&)> eval;
  bool symmetric = false;  // depends on bar xi only through |bar xi|

  double operator()(const LiftedPoint& xi) const { return eval(xi); }
};

/// v(xi) = u(xi', |bar xi|)/|bar xi|; on |bar xi| = 0 the liminf is replaced
/// by the minimum over heights 2^{-j}, j = 10..20.
LiftedField lift(const ScalarField& u);
/// u(x) = x_N v(x', x_N, 0, 0).
ScalarField unlift(const LiftedField& v);

/// Distance from xi to the lifted singular set of u (|bar xi| = a_N over
/// each singular point a); +inf if u has none.
double lifted_singular_distance(const ScalarField& u, const LiftedPoint& xi);

struct SphericalMean {
  double mean = 0;
  double stderr_ = 0;  // standard error from antithetic pairs
  double tol = 0;      // max(4 stderr, rel_tol |mean|)
};
/// Average of v over the sphere |xi - center| = r in R^{N+2}, from seeded
/// scrambled-Halton directions in antithetic pairs.
SphericalMean spherical_mean(const LiftedField& v, const LiftedPoint& center, double r, const QuadratureSpec& q = {});

struct Comparison {
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

/// \int_{B^{*,N+2}_R(eta0)} |v - c| >= (sigma_3/2) \int_{B*_{gamma R}(x)} |u - c y_N| y_N,
/// eta0 = (x', x_N, 0, 0). Requires R >= 2 x_N and
/// gamma <= sqrt(1 - (x_N/R)^2) - x_N/R (the y_N-spheres over B*_{gamma R}
/// then keep at least half their area inside the lifted ball).
Comparison annulus_comparison(const ScalarField& u, double c, const HalfSpacePoint& x, double R, double gamma,
                              const QuadratureSpec& q = {});
bool annulus_comparison_applies(const HalfSpacePoint& x, double R, double gamma);

/// \int_{B^{*,N+2}_{2R} \ B^{*,N+2}_{R/tau}} |v| <= 2 sigma_3 \int_{A*_R(x)} |u| y_N
/// for 1/sqrt(2) < tau < 1 and R >= 2 tau x_N / (1 - tau).
Comparison annulus_split_bound(const ScalarField& u, const HalfSpacePoint& x, double R, double tau,
                               const QuadratureSpec& q = {});
bool annulus_split_applies(const HalfSpacePoint& x, double R, double tau);

}  // namespace hsp
