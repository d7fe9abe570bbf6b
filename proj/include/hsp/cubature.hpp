#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hsp/point.hpp"

namespace hsp {

enum class Execution { serial, parallel };

using Integrand = std::function<double(std::span<const double>)>;

struct Box {
  Coords lo, hi;

  Box() = default;
  Box(Coords l, Coords h);
  int dim() const { return lo.size(); }
  double volume() const;
  bool contains(const Coords& p) const;  // closed box
};

/// One integration task: f over a box. `singular` lists points (inside or on
/// the box) where f may blow up or peak; each one is isolated by graded Duffy
/// pyramids. `breaks` adds initial cuts along axes (axis, coordinate).
struct Piece {
  Box box;
  Integrand f;
  std::vector<Coords> singular;
  std::vector<std::pair<int, double>> breaks;
};

struct CubatureOptions {
  double rel_tol = 1e-6;
  double abs_floor = 1e-14;
  std::size_t max_regions = 200000;
  /// Geometric grading toward a singular point stops at this fraction of the
  /// pyramid height; the innermost cell is integrated as is.
  double inner_radius = 1e-3;
  int grading_levels = 0;  // 0: derived from inner_radius
  /// The tolerance is rel_tol * max(|value|, l1_fraction * \int |f|); raise
  /// it for integrals that cancel by design.
  double l1_fraction = 1e-3;
  Execution exec = Execution::parallel;
};

struct CubatureResult {
  double value = 0;
  double error = 0;
  double l1 = 0;  // estimate of the integral of |f|
  std::size_t evaluations = 0;
  std::size_t regions = 0;
  bool converged = false;
};

/// Adaptive cubature over a union of pieces (Genz-Malik 7/5 for d >= 2,
/// Gauss-Kronrod 15/7 for d = 1). Refinement is batched and every reduction
/// runs in region-index order, so serial and parallel runs agree bitwise.
CubatureResult integrate(std::span<const Piece> pieces, const CubatureOptions& opt);
CubatureResult integrate(const Piece& piece, const CubatureOptions& opt);

/// Expand a piece into its Duffy sub-pieces (exposed for tests).
std::vector<Piece> isolate_singularities(const Piece& piece, const CubatureOptions& opt);

/// Thrown by callers that require convergence.
class QuadratureFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hsp
