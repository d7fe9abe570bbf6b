#include "hsp/domains.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

namespace hsp {

namespace {
constexpr double kPi = std::numbers::pi;
}

SphereParam::SphereParam(int m) : m_(m) {
  if (m < 1 || m > kMaxCoords) throw std::invalid_argument("sphere dimension out of range");
}

double SphereParam::hi(int k) const { return k == m_ - 2 ? 2.0 * kPi : kPi; }

double SphereParam::map(std::span<const double> a, int branch, double* dir) const {
  if (m_ == 1) {
    dir[0] = branch == 0 ? 1.0 : -1.0;
    return 1.0;
  }
  double jac = 1.0, sp = 1.0;
  for (int k = 0; k + 1 < m_; ++k) {
    dir[k] = sp * std::cos(a[k]);
    const double s = std::sin(a[k]);
    if (k + 2 < m_) jac *= std::pow(s, m_ - 2 - k);
    sp *= s;
  }
  dir[m_ - 1] = sp;
  return jac;
}

int SphereParam::invert(std::span<const double> dir, double* a) const {
  if (m_ == 1) return dir[0] >= 0 ? 0 : 1;
  for (int k = 0; k + 2 < m_; ++k) {
    double tail = 0;
    for (int j = k; j < m_; ++j) tail += dir[j] * dir[j];
    tail = std::sqrt(tail);
    a[k] = tail > 0 ? std::acos(std::clamp(dir[k] / tail, -1.0, 1.0)) : 0.0;
  }
  double last = std::atan2(dir[m_ - 1], dir[m_ - 2]);
  if (last < 0) last += 2.0 * kPi;
  a[m_ - 2] = last;
  return 0;
}

std::vector<Piece> cylinder_region(const HalfSpacePoint& x, double rho_lo, double rho_hi, double h_lo, double h_hi,
                                   PointFn f, const std::vector<Coords>& hints) {
  std::vector<Piece> out;
  if (!(rho_hi > rho_lo) || !(h_hi > h_lo)) return out;
  const int n = x.dim();
  const auto sphere = std::make_shared<const SphereParam>(n - 1);
  const int na = sphere->angles();
  const int d = na + 2;  // rho, angles, y_N
  const auto fn = std::make_shared<const PointFn>(std::move(f));
  for (int branch = 0; branch < sphere->branches(); ++branch) {
    Coords lo(d), hi(d);
    lo[0] = rho_lo;
    hi[0] = rho_hi;
    for (int k = 0; k < na; ++k) {
      lo[1 + k] = sphere->lo(k);
      hi[1 + k] = sphere->hi(k);
    }
    lo[d - 1] = h_lo;
    hi[d - 1] = h_hi;
    Piece p;
    p.box = Box(lo, hi);
    p.f = [fn, sphere, x, n, na, branch](std::span<const double> u) {
      double dir[kMaxCoords];
      const double jac = sphere->map(u.subspan(1, na), branch, dir);
      const double rho = u[0];
      Coords y(n);
      for (int i = 0; i + 1 < n; ++i) y[i] = x[i] + rho * dir[i];
      y[n - 1] = u[na + 1];
      const double w = jac * std::pow(rho, n - 2);
      if (w == 0) return 0.0;
      return (*fn)(y) * w;
    };
    for (const Coords& h : hints) {
      Coords t(n - 1);
      double rho = 0;
      for (int i = 0; i + 1 < n; ++i) {
        t[i] = h[i] - x[i];
        rho += t[i] * t[i];
      }
      rho = std::sqrt(rho);
      Coords q(d);
      q[0] = rho;
      q[d - 1] = h[n - 1];
      if (rho > 0) {
        for (int i = 0; i + 1 < n; ++i) t[i] /= rho;
        double ang[kMaxCoords];
        if (sphere->invert(t.span(), ang) != branch) continue;
        for (int k = 0; k < na; ++k) q[1 + k] = ang[k];
      } else {
        // On the axis the point is a whole edge {rho = 0} of the box: cut
        // across it instead of isolating a single corner.
        if (q[d - 1] > h_lo && q[d - 1] < h_hi) p.breaks.emplace_back(d - 1, q[d - 1]);
        continue;
      }
      if (p.box.contains(q)) p.singular.push_back(q);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Piece> cylinder_ball(const HalfSpacePoint& x, double R, PointFn f, const std::vector<Coords>& hints) {
  return cylinder_region(x, 0.0, R, std::max(0.0, x.height() - R), x.height() + R, std::move(f), hints);
}

std::vector<Piece> cylinder_box(const HalfSpacePoint& x, double R, const Box& box, PointFn f,
                                const std::vector<Coords>& hints) {
  std::vector<Piece> out;
  const int n = x.dim();
  const double h_lo = std::max({box.lo[n - 1], x.height() - R, 0.0});
  const double h_hi = std::min(box.hi[n - 1], x.height() + R);
  if (!(h_hi > h_lo)) return out;
  const auto sphere = std::make_shared<const SphereParam>(n - 1);
  const int na = sphere->angles();
  const int d = na + 2;  // s, angles, y_N
  const auto fn = std::make_shared<const PointFn>(std::move(f));
  // segment of the ray x' + rho*dir (0 <= rho <= R) inside the tangential box
  auto clip = [x, R, box, n](const double* dir, double& a, double& b) {
    a = 0.0;
    b = R;
    for (int i = 0; i + 1 < n; ++i) {
      const double o = x[i];
      if (dir[i] == 0) {
        if (o < box.lo[i] || o > box.hi[i]) return false;
        continue;
      }
      double t0 = (box.lo[i] - o) / dir[i], t1 = (box.hi[i] - o) / dir[i];
      if (t0 > t1) std::swap(t0, t1);
      a = std::max(a, t0);
      b = std::min(b, t1);
    }
    return b > a;
  };
  for (int branch = 0; branch < sphere->branches(); ++branch) {
    Coords lo(d), hi(d);
    lo[0] = 0.0;
    hi[0] = 1.0;
    for (int k = 0; k < na; ++k) {
      lo[1 + k] = sphere->lo(k);
      hi[1 + k] = sphere->hi(k);
    }
    lo[d - 1] = h_lo;
    hi[d - 1] = h_hi;
    Piece p;
    p.box = Box(lo, hi);
    p.f = [fn, sphere, x, n, na, branch, clip](std::span<const double> u) {
      double dir[kMaxCoords];
      const double jac = sphere->map(u.subspan(1, na), branch, dir);
      double a, b;
      if (jac == 0 || !clip(dir, a, b)) return 0.0;
      const double rho = a + u[0] * (b - a);
      Coords y(n);
      for (int i = 0; i + 1 < n; ++i) y[i] = x[i] + rho * dir[i];
      y[n - 1] = u[na + 1];
      const double w = jac * std::pow(rho, n - 2) * (b - a);
      if (w == 0) return 0.0;
      return (*fn)(y) * w;
    };
    for (const Coords& h : hints) {
      Coords t(n - 1);
      double rho = 0;
      for (int i = 0; i + 1 < n; ++i) {
        t[i] = h[i] - x[i];
        rho += t[i] * t[i];
      }
      rho = std::sqrt(rho);
      if (!(rho > 0) || !(h[n - 1] >= h_lo && h[n - 1] <= h_hi)) continue;
      for (int i = 0; i + 1 < n; ++i) t[i] /= rho;
      double ang[kMaxCoords];
      if (sphere->invert(t.span(), ang) != branch) continue;
      double a, b;
      if (!clip(t.data(), a, b) || rho < a || rho > b) continue;
      Coords q(d);
      q[0] = (rho - a) / (b - a);
      for (int k = 0; k < na; ++k) q[1 + k] = ang[k];
      q[d - 1] = h[n - 1];
      if (p.box.contains(q)) p.singular.push_back(q);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Piece> cylinder_annulus(const HalfSpacePoint& x, double R, PointFn f, const std::vector<Coords>& hints) {
  const double xn = x.height();
  std::vector<Piece> out;
  auto add = [&](std::vector<Piece> ps) {
    for (auto& p : ps) out.push_back(std::move(p));
  };
  // top slab, bottom slab (may be empty), side ring
  add(cylinder_region(x, 0.0, 2 * R, xn + R, xn + 2 * R, f, hints));
  add(cylinder_region(x, 0.0, 2 * R, std::max(0.0, xn - 2 * R), std::max(0.0, xn - R), f, hints));
  add(cylinder_region(x, R, 2 * R, std::max(0.0, xn - R), xn + R, f, hints));
  return out;
}

std::vector<Piece> euclidean_shell(const HalfSpacePoint& x, double r_lo, double r_hi, PointFn upper, PointFn lower,
                                   const std::vector<Coords>& hints) {
  std::vector<Piece> out;
  if (!(r_hi > r_lo)) return out;
  const int n = x.dim();
  const auto sphere = std::make_shared<const SphereParam>(n - 1);
  const int na = sphere->angles();
  const int d = na + 2;  // r, s, angles
  const double xn = x.height();
  auto theta_c = [xn](double r) { return std::acos(std::clamp(-xn / r, -1.0, 1.0)); };
  for (int part = 0; part < 2; ++part) {
    const auto fn = std::make_shared<const PointFn>(part == 0 ? upper : lower);
    for (int branch = 0; branch < sphere->branches(); ++branch) {
      Coords lo(d), hi(d);
      lo[0] = r_lo;
      hi[0] = r_hi;
      lo[1] = 0.0;
      hi[1] = 1.0;
      for (int k = 0; k < na; ++k) {
        lo[2 + k] = sphere->lo(k);
        hi[2 + k] = sphere->hi(k);
      }
      Piece p;
      p.box = Box(lo, hi);
      p.f = [fn, sphere, x, n, na, branch, part, theta_c](std::span<const double> u) {
        const double r = u[0];
        const double tc = theta_c(r);
        const double span = part == 0 ? tc : std::numbers::pi - tc;
        if (span <= 0) return 0.0;
        const double th = part == 0 ? u[1] * tc : tc + u[1] * span;
        double dir[kMaxCoords];
        const double jac = sphere->map(u.subspan(2, na), branch, dir);
        const double st = std::sin(th);
        Coords y(n);
        for (int i = 0; i + 1 < n; ++i) y[i] = x[i] + r * st * dir[i];
        y[n - 1] = x.height() + r * std::cos(th);
        const double w = jac * std::pow(r, n - 1) * std::pow(st, n - 2) * span;
        if (w == 0) return 0.0;
        return (*fn)(y) * w;
      };
      if (r_lo < xn && xn < r_hi) p.breaks.emplace_back(0, xn);
      if (part == 0) {
        for (const Coords& h : hints) {
          Coords v(n);
          double r = 0;
          for (int i = 0; i < n; ++i) {
            v[i] = h[i] - x[i];
            r += v[i] * v[i];
          }
          r = std::sqrt(r);
          if (!(r > 0)) continue;
          const double th = std::acos(std::clamp(v[n - 1] / r, -1.0, 1.0));
          const double tc = theta_c(r);
          if (th > tc) continue;
          Coords q(d);
          q[0] = r;
          q[1] = tc > 0 ? th / tc : 0.0;
          double tn = 0;
          for (int i = 0; i + 1 < n; ++i) tn += v[i] * v[i];
          tn = std::sqrt(tn);
          if (tn > 0) {
            Coords t(n - 1);
            for (int i = 0; i + 1 < n; ++i) t[i] = v[i] / tn;
            double ang[kMaxCoords];
            if (sphere->invert(t.span(), ang) != branch) continue;
            for (int k = 0; k < na; ++k) q[2 + k] = ang[k];
          } else {
            for (int k = 0; k < na; ++k) q[2 + k] = 0.5 * (lo[2 + k] + hi[2 + k]);
          }
          if (p.box.contains(q)) p.singular.push_back(q);
        }
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<Piece> truncated_box(int d, bool half, double L, Integrand f, const std::vector<Coords>& points) {
  Coords lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = -L;
    hi[i] = L;
  }
  if (half) lo[d - 1] = 0.0;
  Piece p;
  p.box = Box(lo, hi);
  p.f = std::move(f);
  for (Coords q : points) {
    if (half) q[d - 1] = std::max(q[d - 1], 0.0);
    if (!p.box.contains(q)) continue;
    bool dup = false;
    for (const Coords& s : p.singular) dup = dup || s == q;
    if (!dup) p.singular.push_back(q);
  }
  return {std::move(p)};
}

}  // namespace hsp
