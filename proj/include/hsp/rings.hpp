#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hsp/cubature.hpp"
#include "hsp/field.hpp"
#include "hsp/quadrature.hpp"

namespace hsp {

enum class RingCondition {
  classical,        // R^{-N} \int_{R<|x-y|<2R} |u - l|, u extended by 0
  ring_plus,        // R^{-(N+2)} \int_{annulus*} y_N |u - h y_N|
  ring_plus_zero,   // ring_plus with h = 0
  ball_limit,       // R^{-(N+2)} \int_{B*_R} y_N |u - h y_N|
  green_ring,       // (1/ln 2) \int_{level ring} |grad G|^2 / G u
  ring_equivalent,  // R \int_{level ring} |x - y|^{-2N} |u - l|
};

std::string to_string(RingCondition c);
/// Accepts r, r-plus, r-plus-0, ball-limit, green-ring, ring-d.
RingCondition parse_condition(const std::string& s);

double ring_plus_integral(const ScalarField& u, double h, const HalfSpacePoint& x, double R, const QuadratureSpec& q = {});
double ball_limit_integral(const ScalarField& u, double h, const HalfSpacePoint& x, double R, const QuadratureSpec& q = {});
double classical_ring_integral(const ScalarField& u, double l, const HalfSpacePoint& x, double R,
                               const QuadratureSpec& q = {});
double green_ring_integral(const ScalarField& u, const HalfSpacePoint& x, double R, const QuadratureSpec& q = {});
double ring_equivalent_integral(const ScalarField& u, double l, const HalfSpacePoint& x, double R,
                                const QuadratureSpec& q = {});

/// Distance from x along the unit direction `dir` at which G^x drops to
/// `level`. G^x is strictly decreasing along rays from x inside the
/// half-space, so the level sets are star-shaped about x.
double level_distance(const HalfSpacePoint& x, const double* dir, double level);
/// Bounding box of Omega_{r}(x) = {G^x > 1/r}.
Box level_set_box(const HalfSpacePoint& x, double r);

enum class Verdict { satisfied, not_satisfied, inconclusive };
std::string to_string(Verdict v);

struct ScanOptions {
  double R0 = 0;  // 0: max(4, 2.5 x_N)
  int levels = 8;
  double verdict_tol = 1e-4;  // relative to the field's scale at x
  int window = 4;
};

struct RingScanReport {
  RingCondition condition = RingCondition::ring_plus;
  HalfSpacePoint center;
  double h = 0;  // h for (R+)-type conditions, l for the others
  std::vector<double> R, I, cummin, slope;
  double fitted_slope = 0;  // NaN when fewer than `window` usable trailing points
  double min_value = 0;
  double scale = 1;
  Verdict verdict = Verdict::inconclusive;
};

RingScanReport scan(const ScalarField& u, double h_or_l, const HalfSpacePoint& x, RingCondition c,
                    const ScanOptions& opt = {}, const QuadratureSpec& q = {});

/// Columns: k, R, I, cumulative-min, slope.
std::string to_csv(const RingScanReport& r);
nlohmann::json to_json(const RingScanReport& r);

}  // namespace hsp
