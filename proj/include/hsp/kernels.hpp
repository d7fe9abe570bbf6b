#pragma once

#include <stdexcept>

#include "hsp/point.hpp"

namespace hsp {

/// Dimension constants. Everything is recomputable from N alone.
struct Constants {
  int dim = 0;
  double sigma = 0;    // surface measure of the unit sphere S^{N-1}
  double c = 0;        // 1 / (sigma * max(N-2, 1))
  double c_prime = 0;  // 2 / sigma

  static const Constants& of(int n);
};

/// Gamma(n/2) for integer n >= 1 via the half-integer recurrence.
double gamma_half(int n);
/// Surface measure of the unit sphere in R^n (n >= 1; sigma_1 = 2).
double sphere_measure(int n);

struct Regularization {
  double eps = 0;

  Regularization() = default;
  explicit Regularization(double e) : eps(e) {
    if (!(e >= 0 && e < 1)) throw std::invalid_argument("regularization eps must lie in [0, 1)");
  }
};

class CoincidentPoints : public std::domain_error {
 public:
  CoincidentPoints() : std::domain_error("coincident points with eps = 0") {}
};

struct AuxA {
  double a1;  // eps^2 + |mirror(x) - y|^2
  double a2;  // eps^2 + |x - y|^2
};

AuxA aux_a(const HalfSpacePoint& x, const HalfSpacePoint& y, Regularization eps = {});

double fundamental(const HalfSpacePoint& x, const HalfSpacePoint& y, Regularization eps = {});

/// Half-space Green function G^x_eps(y). Evaluated through the a1/a2 forms,
/// which expose the x_N y_N factor and never cancel.
double green(const HalfSpacePoint& x, const HalfSpacePoint& y, Regularization eps = {});

/// Poisson kernel K^x_eps(y').
double poisson(const HalfSpacePoint& x, const BoundaryPoint& yprime, Regularization eps = {});

/// Gradient of y -> G^x_eps(y).
Coords grad_green(const HalfSpacePoint& x, const HalfSpacePoint& y, Regularization eps = {});

/// a1^{-q} - a2^{-q} without cancellation (a1 - a2 = d >= 0 known exactly).
double inv_power_gap(double a1, double d, double q);

struct RingMembership {
  bool in_inner;  // G > 1/R
  bool in_outer;  // G > 1/(2R)
  bool in_ring() const { return in_outer && !in_inner; }
};

RingMembership in_level_ring(const HalfSpacePoint& x, const HalfSpacePoint& y, double R);

}  // namespace hsp
