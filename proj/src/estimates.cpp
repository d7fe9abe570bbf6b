#include "hsp/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hsp {

KernelBounds kernel_bounds(const HalfSpacePoint& x, const HalfSpacePoint& y, Regularization eps) {
  const auto [a1, a2] = aux_a(x, y, eps);
  const int n = x.dim();
  const double cp = Constants::of(n).c_prime;
  const double xn = x.height(), yn = y.height();
  const double q = 0.5 * n;
  const double a2q = std::pow(a2, q);
  const double ratio = std::pow(a2 / a1, q);
  const double lead = 1.0 + ratio + 2.0 * n * yn * yn / a1;
  double tang2 = 0;
  for (int i = 0; i + 1 < n; ++i) tang2 += (x[i] - y[i]) * (x[i] - y[i]);
  KernelBounds b;
  b.green_above = cp * xn * yn / a2q;
  b.dng_above1 = 0.5 * cp * xn / a2q * lead;
  b.dng_above2 = (n + 1) * cp * xn / a2q;
  const double base = xn * xn / (a2q * a2q);
  b.grad2_above1 = 0.25 * cp * cp * base * (lead * lead + 4.0 * n * n * yn * yn * tang2 / (a1 * a1));
  b.grad2_above2 = cp * cp * base * ((1.0 + n) * (1.0 + n) + n * n);
  b.grad2_below = 0.25 * cp * cp * base;
  return b;
}

std::vector<Sample> audit_samples(int dim, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Sample> out;
  out.reserve(count);
  while (out.size() < count) {
    Coords xc(dim), yc(dim);
    for (int i = 0; i + 1 < dim; ++i) xc[i] = -3.0 + 6.0 * u01(rng);
    xc[dim - 1] = std::pow(10.0, -2.0 + 3.0 * u01(rng));
    // random direction, log-uniform distance; reflect into the half-space
    Coords dir(dim);
    double nrm = 0;
    for (int i = 0; i < dim; ++i) {
      dir[i] = gauss(rng);
      nrm += dir[i] * dir[i];
    }
    nrm = std::sqrt(nrm);
    const double r = std::pow(10.0, -2.0 + 4.0 * u01(rng));
    for (int i = 0; i < dim; ++i) yc[i] = xc[i] + r * dir[i] / nrm;
    yc[dim - 1] = std::abs(yc[dim - 1]);
    const double eps = (u01(rng) < 0.5) ? 0.0 : 0.999 * u01(rng);
    if (yc[dim - 1] == 0 || dist2(xc, yc) == 0) continue;
    out.push_back({HalfSpacePoint(xc), HalfSpacePoint(yc), eps});
  }
  return out;
}

std::size_t AuditReport::total_violations() const {
  std::size_t t = symmetry_violations + monotone_violations + gradient_violations;
  for (const auto& b : bounds) t += b.violations;
  return t;
}

Coords grad_green_fd(const HalfSpacePoint& x, const HalfSpacePoint& y, Regularization eps, double step) {
  const int n = x.dim();
  Coords g(n);
  for (int j = 0; j < n; ++j) {
    auto at = [&](double s) {
      HalfSpacePoint p = y;
      p[j] += s;
      return green(x, p, eps);
    };
    g[j] = (8.0 * (at(step) - at(-step)) - (at(2 * step) - at(-2 * step))) / (12.0 * step);
  }
  return g;
}

AuditReport estimates_audit(int dim, std::size_t samples, std::uint64_t seed) {
  AuditReport rep;
  rep.dim = dim;
  rep.samples = samples;
  enum { kGAbove, kDng1, kDng2, kGr1, kGr2, kGrBelow, kCount };
  rep.bounds = {{"green_above", 0, 0},      {"dng_above1", 0, 0},   {"dng_above2", 0, 0},
                {"grad2_above1", 0, 0},     {"grad2_above2", 0, 0}, {"grad2_below", 0, 0}};
  auto upper = [](BoundCheck& c, double lhs, double rhs) {
    c.worst_ratio = std::max(c.worst_ratio, lhs / rhs);
    if (lhs > rhs * (1.0 + kBoundSlack)) ++c.violations;
  };
  auto lower = [](BoundCheck& c, double lhs, double rhs) {
    c.worst_ratio = std::max(c.worst_ratio, rhs / lhs);
    if (lhs < rhs * (1.0 - kBoundSlack)) ++c.violations;
  };

  for (const Sample& s : audit_samples(dim, samples, seed)) {
    const Regularization eps(s.eps);
    const double gxy = green(s.x, s.y, eps);
    const double gyx = green(s.y, s.x, eps);
    const double sym = std::abs(gxy - gyx) / std::max(std::abs(gxy), 1e-300);
    rep.max_symmetry_rel = std::max(rep.max_symmetry_rel, sym);
    if (sym > 1e-12) ++rep.symmetry_violations;

    // eps -> G_eps is nonincreasing
    const double e2 = s.eps + 0.5 * (1.0 - s.eps);
    if (green(s.x, s.y, Regularization(e2)) > gxy * (1.0 + kBoundSlack)) ++rep.monotone_violations;

    const KernelBounds b = kernel_bounds(s.x, s.y, eps);
    const Coords g = grad_green(s.x, s.y, eps);
    const double g2 = g.norm2();
    const double dng = std::abs(g[dim - 1]);
    if (gxy < 0) ++rep.bounds[kGAbove].violations;
    upper(rep.bounds[kGAbove], gxy, b.green_above);
    upper(rep.bounds[kDng1], dng, b.dng_above1);
    upper(rep.bounds[kDng2], dng, b.dng_above2);
    upper(rep.bounds[kGr1], g2, b.grad2_above1);
    upper(rep.bounds[kGr2], g2, b.grad2_above2);
    lower(rep.bounds[kGrBelow], g2, b.grad2_below);

    const double step = 1e-3 * std::sqrt(aux_a(s.x, s.y, eps).a2);
    const Coords fd = grad_green_fd(s.x, s.y, eps, step);
    double diff = 0;
    for (int j = 0; j < dim; ++j) diff = std::max(diff, std::abs(fd[j] - g[j]));
    const double rel = diff / std::sqrt(g2);
    rep.max_gradient_fd_rel = std::max(rep.max_gradient_fd_rel, rel);
    if (rel > 1e-6) ++rep.gradient_violations;
  }
  return rep;
}

}  // namespace hsp
