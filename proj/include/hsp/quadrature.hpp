#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hsp/cubature.hpp"

namespace hsp {

/// User-facing integration settings shared by every module.
struct QuadratureSpec {
  double rel_tol = 1e-6;
  double abs_floor = 1e-14;
  std::size_t max_subdivisions = 200000;
  /// Grading of singular points stops at this fraction of the local scale.
  double singular_shell_radius = 1e-3;
  /// Directions used by spherical means.
  std::size_t directions = 4096;
  std::uint64_t seed = 1;
  Execution exec = Execution::parallel;
  double l1_fraction = 1e-3;  // see CubatureOptions

  CubatureOptions cubature() const {
    CubatureOptions o;
    o.rel_tol = rel_tol;
    o.abs_floor = abs_floor;
    o.max_regions = max_subdivisions;
    o.inner_radius = singular_shell_radius;
    o.exec = exec;
    o.l1_fraction = l1_fraction;
    return o;
  }
  QuadratureSpec with_tol(double t) const {
    QuadratureSpec q = *this;
    q.rel_tol = t;
    return q;
  }
};

/// Integrate and throw QuadratureFailure unless the result converged.
CubatureResult integrate_checked(std::span<const Piece> pieces, const QuadratureSpec& q, const char* what);

struct TailedResult {
  double value = 0;
  double tail = 0;     // rigorous bound on the truncated part
  double radius = 0;   // truncation radius used
  CubatureResult cubature;
};

/// Integrate over a growing truncated domain. `pieces(L)` covers the part of
/// the domain within radius L, `tail(L)` bounds what lies beyond. The
/// tolerance is split evenly between truncation and cubature. Returns +inf
/// with tail = +inf if the tail bound never becomes finite.
TailedResult integrate_with_tail(const std::function<std::vector<Piece>(double)>& pieces,
                                 const std::function<double(double)>& tail, double L0, const QuadratureSpec& q,
                                 const char* what);

}  // namespace hsp
