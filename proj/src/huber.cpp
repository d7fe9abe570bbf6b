#include "hsp/huber.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "hsp/domains.hpp"
#include "hsp/kernels.hpp"
#include "hsp/sampling.hpp"

namespace hsp {

namespace {

constexpr double kPi = std::numbers::pi;

double bar_norm(const LiftedPoint& xi, int n) {
  const double a = xi[n - 1], b = xi[n], c = xi[n + 1];
  return std::sqrt(a * a + b * b + c * c);
}

// Area of {|bar xi| = r} inside the ball |bar xi - (a, 0, 0)| < rho.
double cap_area(double r, double a, double rho) {
  if (r <= 0) return 0.0;
  if (a == 0) return r < rho ? 4 * kPi * r * r : 0.0;
  const double t = std::clamp((r * r + a * a - rho * rho) / (2 * a * r), -1.0, 1.0);
  return 2 * kPi * r * r * (1 - t);
}

}  // namespace

LiftedPoint lifted_point(std::span<const double> tangential, double b1, double b2, double b3) {
  LiftedPoint p(static_cast<int>(tangential.size()) + 3);
  int i = 0;
  for (double v : tangential) p[i++] = v;
  p[i++] = b1;
  p[i++] = b2;
  p[i] = b3;
  return p;
}

LiftedField lift(const ScalarField& u) {
  LiftedField v;
  v.dim = u.dim;
  v.symmetric = true;
  const int n = u.dim;
  v.eval = [u, n](const LiftedPoint& xi) {
    if (xi.size() != n + 2) throw std::invalid_argument("lifted point has the wrong dimension");
    Coords y(n);
    for (int i = 0; i + 1 < n; ++i) y[i] = xi[i];
    const double r = bar_norm(xi, n);
    if (r > 0) {
      y[n - 1] = r;
      return u(HalfSpacePoint(y)) / r;
    }
    double m = std::numeric_limits<double>::infinity();
    for (int j = 10; j <= 20; ++j) {
      const double t = std::ldexp(1.0, -j);
      y[n - 1] = t;
      const double w = u(HalfSpacePoint(y)) / t;
      if (std::isnan(w)) return w;
      m = std::min(m, w);
    }
    return m;
  };
  return v;
}

ScalarField unlift(const LiftedField& v) {
  if (!v.symmetric) throw std::invalid_argument("unlift needs a field symmetric in bar xi");
  ScalarField u;
  u.dim = v.dim;
  u.name = "unlifted";
  u.eval = [v](const HalfSpacePoint& x) {
    const int n = x.dim();
    LiftedPoint xi(n + 2);
    for (int i = 0; i < n; ++i) xi[i] = x[i];
    return x.height() * v(xi);
  };
  return u;
}

double lifted_singular_distance(const ScalarField& u, const LiftedPoint& xi) {
  const int n = u.dim;
  const double r = bar_norm(xi, n);
  double best = std::numeric_limits<double>::infinity();
  for (const Coords& a : u.singular) {
    double s = 0;
    for (int i = 0; i + 1 < n; ++i) s += (xi[i] - a[i]) * (xi[i] - a[i]);
    s += (r - a[n - 1]) * (r - a[n - 1]);
    best = std::min(best, std::sqrt(s));
  }
  return best;
}

SphericalMean spherical_mean(const LiftedField& v, const LiftedPoint& center, double r, const QuadratureSpec& q) {
  if (!(r > 0)) throw std::invalid_argument("sphere radius must be positive");
  const int m = center.size();
  const auto shift = random_shift(m, q.seed);
  const std::size_t pairs = std::max<std::size_t>(q.directions / 2, 2);
  std::vector<double> vals(pairs);
  const bool par = q.exec == Execution::parallel;
#pragma omp parallel for schedule(static) if (par)
  for (std::size_t i = 0; i < pairs; ++i) {
    const Coords h = halton(i, m, shift);
    double d[kMaxCoords], nrm = 0;
    for (int k = 0; k < m; ++k) {
      const double p = std::clamp(h[k], 1e-16, 1 - 1e-16);
      d[k] = std::numbers::sqrt2 * boost::math::erf_inv(2 * p - 1);
      nrm += d[k] * d[k];
    }
    nrm = std::sqrt(nrm);
    LiftedPoint a = center, b = center;
    for (int k = 0; k < m; ++k) {
      a[k] += r * d[k] / nrm;
      b[k] -= r * d[k] / nrm;
    }
    vals[i] = 0.5 * (v(a) + v(b));
  }
  double mean = 0;
  for (double x : vals) mean += x;
  mean /= pairs;
  double var = 0;
  for (double x : vals) var += (x - mean) * (x - mean);
  var /= (pairs - 1);
  SphericalMean out;
  out.mean = mean;
  out.stderr_ = std::sqrt(var / pairs);
  out.tol = std::max(4 * out.stderr_, q.rel_tol * std::abs(mean));
  return out;
}

bool annulus_comparison_applies(const HalfSpacePoint& x, double R, double gamma) {
  const double a = x.height() / R;
  return gamma > 0 && gamma < 1 && a <= 0.5 && gamma <= std::sqrt(1 - a * a) - a;
}

bool annulus_split_applies(const HalfSpacePoint& x, double R, double tau) {
  return tau > std::numbers::sqrt2 / 2 && tau < 1 && R >= 2 * tau * x.height() / (1 - tau) * (1 - 1e-12);
}

namespace {

// Interior singular points plus the boundary points where u is rough.
std::vector<Coords> hints(const ScalarField& u) {
  std::vector<Coords> out = u.singular;
  for (const Coords& f : u.boundary_features) out.push_back(HalfSpacePoint(f.span(), 0.0).coords());
  return out;
}

// \int over {rho_lo <= |xi' - x'| < rho_hi} x {bar xi} of |u(xi', r)/r - c| * w(r)
// where w(r) is the area of the r-sphere kept by the bar-xi constraint.
double lifted_integral(const ScalarField& u, double c, const HalfSpacePoint& x, double rho_lo, double rho_hi,
                       double r_hi, std::function<double(double)> area, const std::vector<double>& kinks,
                       const QuadratureSpec& q) {
  const int n = x.dim();
  auto pieces = cylinder_region(
      x, rho_lo, rho_hi, 0.0, r_hi,
      [&u, c, n, area](const Coords& y) {
        const double r = y[n - 1];
        const double w = area(r);
        if (w == 0 || !(r > 0)) return 0.0;
        return std::abs(u(HalfSpacePoint(y)) / r - c) * w;
      },
      hints(u));
  for (Piece& p : pieces) {
    const int last = p.box.dim() - 1;
    for (double k : kinks)
      if (k > p.box.lo[last] && k < p.box.hi[last]) p.breaks.emplace_back(last, k);
  }
  return integrate_checked(pieces, q, "lifted ball integral").value;
}

}  // namespace

Comparison annulus_comparison(const ScalarField& u, double c, const HalfSpacePoint& x, double R, double gamma,
                              const QuadratureSpec& q) {
  if (!x.interior()) throw std::invalid_argument("annulus_comparison needs an interior point");
  if (!annulus_comparison_applies(x, R, gamma))
    throw std::invalid_argument("annulus_comparison: need 0 < gamma < 1, R >= 2 x_N and gamma <= sqrt(1-(x_N/R)^2) - x_N/R");
  const int n = x.dim();
  const double a = x.height();
  Comparison out;
  out.lhs = lifted_integral(
      u, c, x, 0.0, R, a + R, [a, R](double r) { return cap_area(r, a, R); }, {std::abs(R - a)}, q);
  auto pieces = cylinder_ball(
      x, gamma * R,
      [&u, c, n](const Coords& y) {
        const double yn = y[n - 1];
        if (!(yn > 0)) return 0.0;
        return std::abs(u(HalfSpacePoint(y)) - c * yn) * yn;
      },
      hints(u));
  out.rhs = 0.5 * sphere_measure(3) * integrate_checked(pieces, q, "annulus_comparison").value;
  const double tol = 10 * q.rel_tol;
  out.holds = out.lhs >= out.rhs * (1 - tol) - q.abs_floor;
  return out;
}

Comparison annulus_split_bound(const ScalarField& u, const HalfSpacePoint& x, double R, double tau,
                               const QuadratureSpec& q) {
  if (!x.interior()) throw std::invalid_argument("annulus_split_bound needs an interior point");
  if (!annulus_split_applies(x, R, tau))
    throw std::invalid_argument("annulus_split_bound: need 1/sqrt(2) < tau < 1 and R >= 2 tau x_N / (1 - tau)");
  const int n = x.dim();
  const double a = x.height();
  const double inner = R / tau, outer = 2 * R;
  Comparison out;
  const std::vector<double> kinks{std::abs(outer - a), outer + a, std::abs(inner - a), inner + a};
  out.lhs = lifted_integral(
                u, 0.0, x, 0.0, inner, a + outer,
                [a, inner, outer](double r) { return cap_area(r, a, outer) - cap_area(r, a, inner); }, kinks, q) +
            lifted_integral(
                u, 0.0, x, inner, outer, a + outer, [a, outer](double r) { return cap_area(r, a, outer); }, kinks,
                q);
  auto pieces = cylinder_annulus(
      x, R,
      [&u, n](const Coords& y) {
        const double yn = y[n - 1];
        if (!(yn > 0)) return 0.0;
        return std::abs(u(HalfSpacePoint(y))) * yn;
      },
      hints(u));
  out.rhs = 2 * sphere_measure(3) * integrate_checked(pieces, q, "annulus_split_bound").value;
  const double tol = 10 * q.rel_tol;
  out.holds = out.lhs <= out.rhs * (1 + tol) + q.abs_floor;
  return out;
}

}  // namespace hsp
