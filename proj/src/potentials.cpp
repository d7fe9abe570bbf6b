#include "hsp/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hsp/domains.hpp"
#include "hsp/kernels.hpp"
#include "hsp/sampling.hpp"

namespace hsp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Grade singular points down to a fraction of the distance to the boundary,
// relative to the size of the box they sit in.
QuadratureSpec local(const QuadratureSpec& q, double height, double box_size) {
  QuadratureSpec r = q;
  r.singular_shell_radius = q.singular_shell_radius * std::min(1.0, height / box_size);
  return r;
}

// Length scale of a density's peaks, for grading them inside a large box.
double feature_scale(const Density& d) {
  return d.envelope.kind == Envelope::Kind::gaussian ? d.envelope.scale : 1.0;
}

double box_size(const Box& b) {
  double s = 0;
  for (int i = 0; i < b.dim(); ++i) s = std::max(s, b.hi[i] - b.lo[i]);
  return s;
}

template <class Measure, class Fn>
double atoms_sum(const Measure& m, Fn kernel, bool& pos_inf, bool& neg_inf) {
  double s = 0;
  for (const Atom& a : m.positive.atoms) {
    const double k = kernel(a.loc);
    if (std::isinf(k)) pos_inf = true;
    else s += a.w * k;
  }
  for (const Atom& a : m.negative.atoms) {
    const double k = kernel(a.loc);
    if (std::isinf(k)) neg_inf = true;
    else s -= a.w * k;
  }
  return s;
}

}  // namespace

double green_potential(const InteriorMeasure& mu, const HalfSpacePoint& x, const QuadratureSpec& q) {
  if (mu.dim != x.dim()) throw std::invalid_argument("measure and point dimensions differ");
  if (!x.interior()) throw std::invalid_argument("green_potential needs an interior point");
  const int n = x.dim();
  bool pos_inf = false, neg_inf = false;
  double total = atoms_sum(
      mu, [&](const Coords& y) { return y == x.coords() ? kInfinity : green(x, HalfSpacePoint(y)); }, pos_inf,
      neg_inf);
  if (pos_inf || neg_inf) return pos_inf && neg_inf ? kNaN : (pos_inf ? kInfinity : -kInfinity);

  const Constants& k = Constants::of(n);
  const double xnorm = x.norm();
  auto one = [&](const Density& den) -> double {
    Integrand f = [&den, x](std::span<const double> y) {
      const HalfSpacePoint p{Coords(y)};
      if (!(p.height() > 0) || p == x) return 0.0;
      return green(x, p) * std::abs(den(p.coords()));
    };
    std::vector<Coords> pts{x.coords()};
    pts.insert(pts.end(), den.peaks.begin(), den.peaks.end());
    if (den.support) {
      Piece p;
      p.box = *den.support;
      p.f = f;
      for (const Coords& c : pts)
        if (p.box.contains(c)) p.singular.push_back(c);
      return integrate_checked(std::span<const Piece>(&p, 1), local(q, x.height(), box_size(p.box)),
                               "green_potential")
          .value;
    }
    // G <= C' x_N y_N / |x - y|^N and |x - y| >= |y| (1 - |x|/L) beyond L
    auto tail = [&](double L) {
      if (L <= xnorm) return kInfinity;
      return k.c_prime * x.height() * std::pow(1.0 - xnorm / L, -n) * 0.5 * k.sigma * den.envelope.tail(L, 0);
    };
    const double L0 = std::max(8.0, 4.0 * xnorm);
    QuadratureSpec qq = local(q, x.height(), 2.0 * L0);
    if (!den.peaks.empty())
      qq.singular_shell_radius = std::min(qq.singular_shell_radius, 0.25 * feature_scale(den) / (2.0 * L0));
    return integrate_with_tail([&](double L) { return truncated_box(n, true, L, f, pts); }, tail, L0, qq,
                               "green_potential")
        .value;
  };
  for (const Density& d : mu.positive.densities) total += one(d);
  for (const Density& d : mu.negative.densities) total -= one(d);
  return total;
}

double poisson_integral(const BoundaryMeasure& nu, const HalfSpacePoint& x, const QuadratureSpec& q) {
  if (nu.dim != x.dim()) throw std::invalid_argument("measure and point dimensions differ");
  if (!x.interior()) throw std::invalid_argument("poisson_integral needs an interior point");
  const int n = x.dim();
  const int d = n - 1;
  bool pos_inf = false, neg_inf = false;
  double total = atoms_sum(nu, [&](const Coords& y) { return poisson(x, y); }, pos_inf, neg_inf);

  const Constants& k = Constants::of(n);
  const double sigma = sphere_measure(d);
  Coords xp(d);
  for (int i = 0; i < d; ++i) xp[i] = x[i];
  const double xpnorm = xp.norm();
  // K^x is smooth with a peak of width x_N at x'; grading is only worth it
  // when that peak is small against the box, and only down to ~x_N.
  auto peaked = [&](double size) {
    QuadratureSpec r = q;
    r.singular_shell_radius = std::min(0.5, 0.25 * x.height() / size);
    return std::pair{r, x.height() < 0.05 * size ? std::vector<Coords>{xp} : std::vector<Coords>{}};
  };
  auto one = [&](const Density& den) -> double {
    Integrand f = [&den, x](std::span<const double> y) {
      const Coords c(y);
      return poisson(x, c) * std::abs(den(c));
    };
    if (den.support) {
      Piece p;
      p.box = *den.support;
      p.f = f;
      auto [qq, pts] = peaked(box_size(p.box));
      for (const Coords& c : pts)
        if (p.box.contains(c)) p.singular.push_back(c);
      return integrate_checked(std::span<const Piece>(&p, 1), qq, "poisson_integral").value;
    }
    // K <= C' x_N / |x' - y'|^N and |x' - y'| >= |y'| (1 - |x'|/L) beyond L
    auto tail = [&](double L) {
      if (L <= xpnorm) return kInfinity;
      return k.c_prime * x.height() * std::pow(1.0 - xpnorm / L, -n) * sigma * den.envelope.tail(L, -2);
    };
    const double L0 = std::max(8.0, 4.0 * xpnorm);
    auto [qq, pts] = peaked(2.0 * L0);
    // far from x the density's own peaks must be resolved as well
    if (!den.peaks.empty()) {
      pts.insert(pts.end(), den.peaks.begin(), den.peaks.end());
      qq.singular_shell_radius = std::min(qq.singular_shell_radius, 0.25 * feature_scale(den) / (2.0 * L0));
    }
    return integrate_with_tail([&](double L) { return truncated_box(d, false, L, f, pts); }, tail, L0, qq,
                               "poisson_integral")
        .value;
  };
  for (const Density& dd : nu.positive.densities) total += one(dd);
  for (const Density& dd : nu.negative.densities) total -= one(dd);
  if (pos_inf || neg_inf) return pos_inf && neg_inf ? kNaN : (pos_inf ? kInfinity : -kInfinity);
  return total;
}

void check_admissible(const RepresentationTriple& t, const QuadratureSpec& q) {
  const int n = t.mu.dim;
  if (t.nu.dim != n) throw MeasureError("mu and nu dimensions differ");
  if (!std::isfinite(t.h)) throw MeasureError("slope h must be finite");
  Coords e(n);
  e[n - 1] = 1.0;
  const double m = weighted_mass(t.mu, CylinderBall(HalfSpacePoint(e), 4.0), q.with_tol(std::max(q.rel_tol, 1e-4)));
  if (!std::isfinite(m)) throw MeasureError("mu is not locally finite against y_N");
}

ScalarField represent(const RepresentationTriple& t, const QuadratureSpec& q) {
  check_admissible(t, q);
  ScalarField u;
  u.dim = t.dim();
  u.declared_h = t.h;
  u.provenance = Provenance::assembled;
  u.name = "representation";
  u.eval = [t, q](const HalfSpacePoint& x) {
    double v = t.h * x.height();
    if (!t.nu.empty()) v += poisson_integral(t.nu, x, q);
    if (!t.mu.empty()) v += green_potential(t.mu, x, q);
    return v;
  };
  // Only atoms make u singular; the potentials of densities are smooth.
  for (const MeasurePart* p : {&t.mu.positive, &t.mu.negative})
    for (const Atom& a : p->atoms) u.singular.push_back(a.loc);
  for (const MeasurePart* p : {&t.nu.positive, &t.nu.negative})
    for (const Atom& a : p->atoms) u.boundary_features.push_back(a.loc);
  return u;
}

namespace {

// Halton point mapped into B*_R(c) intersected with the half-space.
HalfSpacePoint in_cylinder(const Coords& h, const HalfSpacePoint& c, double R) {
  const int n = c.dim();
  HalfSpacePoint y = c;
  // tangential: uniform in the disc via rejection-free radial map
  if (n == 2) {
    y[0] = c[0] + R * (2.0 * h[0] - 1.0);
  } else {
    double r2 = 0;
    for (int i = 0; i + 1 < n; ++i) {
      y[i] = 2.0 * h[i] - 1.0;
      r2 += y[i] * y[i];
    }
    // shrink the cube onto the disc along rays (keeps low discrepancy reasonable)
    double inf = 0;
    for (int i = 0; i + 1 < n; ++i) inf = std::max(inf, std::abs(y[i]));
    const double s = r2 > 0 ? inf / std::sqrt(r2) : 0.0;
    for (int i = 0; i + 1 < n; ++i) y[i] = c[i] + R * s * y[i];
  }
  const double lo = std::max(0.0, c.height() - R), hi = c.height() + R;
  y[n - 1] = lo + (hi - lo) * h[n - 1];
  if (!(y[n - 1] > 0)) y[n - 1] = 1e-3 * (hi - lo);
  return y;
}

}  // namespace

std::vector<HalfSpacePoint> nested_cloud(int n, int levels, int per_level, std::uint64_t seed) {
  const auto shift = random_shift(n, seed);
  Coords e(n);
  e[n - 1] = 1.0;
  const HalfSpacePoint en(e);
  std::vector<HalfSpacePoint> out;
  std::uint64_t idx = 0;
  for (int k = 0; k <= levels; ++k) {
    const double R = std::ldexp(1.0, k);
    for (int i = 0; i < per_level; ++i) out.push_back(in_cylinder(halton(idx++, n, shift), en, R));
  }
  return out;
}

SlopeEstimate estimate_h(const ScalarField& u, int box_levels, const QuadratureSpec& q) {
  const int n = u.dim;
  const int per_level = 48;
  SlopeEstimate out;
  out.h = kInfinity;
  const auto shift = random_shift(n, q.seed);
  Coords e(n);
  e[n - 1] = 1.0;
  const HalfSpacePoint en(e);
  std::uint64_t idx = 0;
  auto probe = [&](const HalfSpacePoint& x) {
    const double v = u(x);
    if (v == -kInfinity) out.sentinel = true;
    if (std::isnan(v) || v == kInfinity) return;
    const double r = v / x.height();
    if (r < out.h) {
      out.h = r;
      out.argmin = x;
    }
  };
  for (int k = 0; k <= box_levels && !out.sentinel; ++k) {
    const double R = std::ldexp(1.0, k);
    for (int i = 0; i < per_level; ++i) probe(in_cylinder(halton(idx++, n, shift), en, R));
    // local refinement around the running minimizer
    for (int s = 1; s <= 3 && std::isfinite(out.h); ++s) {
      const HalfSpacePoint c = out.argmin;
      const double r = std::min(0.5 * c.height(), R * std::ldexp(1.0, -2 * s));
      for (int i = 0; i < 8; ++i) probe(in_cylinder(halton(idx++, n, shift), c, r));
    }
    out.level_min.push_back(out.h);
  }
  if (out.sentinel) out.h = -kInfinity;
  return out;
}

LowerBound lower_bound_check(const ScalarField& u, const RepresentationTriple& t,
                             const std::vector<HalfSpacePoint>& grid) {
  LowerBound out;
  if (t.mu.empty() && t.nu.empty()) {
    out.degenerate = true;
    return out;
  }
  const int n = t.dim();
  out.c0 = kInfinity;
  for (const HalfSpacePoint& x : grid) {
    const double v = u(x);
    if (std::isnan(v)) continue;
    const double c = (v - t.h * x.height()) * (1.0 + std::pow(x.norm(), n)) / x.height();
    if (c < out.c0) {
      out.c0 = c;
      out.argmin = x;
    }
  }
  out.holds = out.c0 > 0 && std::isfinite(out.c0);
  return out;
}

}  // namespace hsp
