#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsp/kernels.hpp"

namespace hsp {

/// Right-hand sides of the kernel bounds at one (x, y, eps).
struct KernelBounds {
  double green_above;   // C' x_N y_N / a2^{N/2}
  double dng_above1;    // (C'/2)(x_N/a2^{N/2}) [1 + (a2/a1)^{N/2} + 2N y_N^2/a1]
  double dng_above2;    // (N+1) C' x_N / a2^{N/2}
  double grad2_above1;  // (C'/2)^2 x_N^2/a2^N [(1+(a2/a1)^{N/2}+2N y^2/a1)^2 + 4N^2 y^2|x'-y'|^2/a1^2]
  double grad2_above2;  // C'^2 x_N^2/a2^N [(1+N)^2 + N^2]
  double grad2_below;   // (C'/2)^2 x_N^2/a2^N
};

KernelBounds kernel_bounds(const HalfSpacePoint& x, const HalfSpacePoint& y, Regularization eps);

struct Sample {
  HalfSpacePoint x, y;
  double eps;
};

/// Seeded sample triples spread over many scales: heights 1e-2..1e1, pair
/// distances 1e-2..1e2, half of them with eps = 0.
std::vector<Sample> audit_samples(int dim, std::size_t count, std::uint64_t seed);

struct BoundCheck {
  std::string name;
  std::size_t violations = 0;
  double worst_ratio = 0;  // max of lhs/rhs (or rhs/lhs for lower bounds)
};

struct AuditReport {
  int dim = 0;
  std::size_t samples = 0;
  double max_symmetry_rel = 0;
  std::size_t symmetry_violations = 0;  // > 1e-12 relative
  std::size_t monotone_violations = 0;
  double max_gradient_fd_rel = 0;       // |fd - analytic|_inf / |analytic|
  std::size_t gradient_violations = 0;  // > 1e-6
  std::vector<BoundCheck> bounds;

  std::size_t total_violations() const;
};

/// Relative slack granted to every bound comparison (rounding only).
inline constexpr double kBoundSlack = 1e-12;

AuditReport estimates_audit(int dim, std::size_t samples, std::uint64_t seed);

/// Fourth-order central difference of y -> G^x_eps(y).
Coords grad_green_fd(const HalfSpacePoint& x, const HalfSpacePoint& y, Regularization eps, double step);

}  // namespace hsp
