#pragma once

#include <vector>

#include "hsp/field.hpp"
#include "hsp/measures.hpp"
#include "hsp/quadrature.hpp"

namespace hsp {

/// (h, nu, mu): u(x) = h x_N + \int K^x dnu + \int G^x dmu.
struct RepresentationTriple {
  double h = 0;
  BoundaryMeasure nu;
  InteriorMeasure mu;

  int dim() const { return mu.dim; }
  static RepresentationTriple zero(int n, double h = 0) { return {h, BoundaryMeasure::zero(n), InteriorMeasure::zero(n)}; }
};

/// \int G^x dmu. Returns +inf (or -inf for a negative atom) when x is an atom.
double green_potential(const InteriorMeasure& mu, const HalfSpacePoint& x, const QuadratureSpec& q = {});
/// \int K^x dnu.
double poisson_integral(const BoundaryMeasure& nu, const HalfSpacePoint& x, const QuadratureSpec& q = {});

/// Throws MeasureError unless the triple is consistent and locally finite.
void check_admissible(const RepresentationTriple& t, const QuadratureSpec& q = {});
ScalarField represent(const RepresentationTriple& t, const QuadratureSpec& q = {});

/// Points in the nested boxes B*_{2^k}(e_N), k = 0..levels, `per_level` each.
std::vector<HalfSpacePoint> nested_cloud(int n, int levels, int per_level, std::uint64_t seed);

struct SlopeEstimate {
  double h = 0;                    // stabilized minimum of u/x_N
  std::vector<double> level_min;   // running minimum after each box level
  HalfSpacePoint argmin;
  bool sentinel = false;           // u returned -inf somewhere
};
SlopeEstimate estimate_h(const ScalarField& u, int box_levels = 8, const QuadratureSpec& q = {});

struct LowerBound {
  double c0 = 0;
  bool holds = false;
  bool degenerate = false;  // u == h x_N, nothing to bound
  HalfSpacePoint argmin;
};
/// c0 = min over the grid of (u - h x_N)(1 + |x|^N)/x_N.
LowerBound lower_bound_check(const ScalarField& u, const RepresentationTriple& t, const std::vector<HalfSpacePoint>& grid);

}  // namespace hsp
