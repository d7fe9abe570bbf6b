#pragma once

#include <functional>
#include <vector>

#include "hsp/cubature.hpp"
#include "hsp/point.hpp"

namespace hsp {

/// Parameterization of the unit sphere S^{m-1} in R^m by hyperspherical
/// angles. For m = 1 the "sphere" is {-1, +1}, represented by two branches
/// with no angle.
class SphereParam {
 public:
  explicit SphereParam(int m);

  int ambient() const { return m_; }
  int angles() const { return m_ >= 2 ? m_ - 1 : 0; }
  int branches() const { return m_ == 1 ? 2 : 1; }
  double lo(int) const { return 0.0; }
  double hi(int k) const;
  /// Writes the unit vector into dir[0..m) and returns the surface Jacobian.
  double map(std::span<const double> ang, int branch, double* dir) const;
  /// Inverse of map for a unit vector; returns the branch.
  int invert(std::span<const double> dir, double* ang) const;

 private:
  int m_;
};

/// Function of a point of R^N given by its coordinates.
using PointFn = std::function<double(const Coords&)>;

/// Region {rho_lo <= |y' - x'| <= rho_hi, h_lo <= y_N <= h_hi} in cylinder
/// coordinates (rho, angles, y_N) about the axis through x. `hints` are
/// points of R^N where f peaks; they become singular points of the pieces.
std::vector<Piece> cylinder_region(const HalfSpacePoint& x, double rho_lo, double rho_hi, double h_lo, double h_hi,
                                   PointFn f, const std::vector<Coords>& hints = {});

/// B*_R(x) intersected with the half-space.
std::vector<Piece> cylinder_ball(const HalfSpacePoint& x, double R, PointFn f, const std::vector<Coords>& hints = {});

/// B*_R(x) intersected with a box. Rays from the axis are clipped to the
/// box exactly, so the integrand never sees the box faces.
std::vector<Piece> cylinder_box(const HalfSpacePoint& x, double R, const Box& box, PointFn f,
                                const std::vector<Coords>& hints = {});
/// {y_N > 0, R <= |x - y|_* < 2R}, split into three cylinder rectangles.
std::vector<Piece> cylinder_annulus(const HalfSpacePoint& x, double R, PointFn f,
                                    const std::vector<Coords>& hints = {});

/// Euclidean shell {r_lo <= |y - x| <= r_hi} of R^N in spherical coordinates
/// about x, polar angle measured from +e_N. The part in the half-space
/// integrates `upper`; the part with y_N < 0 integrates `lower`.
std::vector<Piece> euclidean_shell(const HalfSpacePoint& x, double r_lo, double r_hi, PointFn upper,
                                   PointFn lower, const std::vector<Coords>& hints = {});

/// [-L, L]^d, or [-L, L]^{d-1} x [0, L] when `half`, with the given points
/// (clamped to the box floor) isolated.
std::vector<Piece> truncated_box(int d, bool half, double L, Integrand f, const std::vector<Coords>& points);

}  // namespace hsp
