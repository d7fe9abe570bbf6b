#include "hsp/kernels.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace hsp {

double gamma_half(int n) {
  if (n < 1) throw std::invalid_argument("gamma_half needs n >= 1");
  // Gamma(1) = 1, Gamma(1/2) = sqrt(pi), Gamma(s+1) = s Gamma(s).
  double g = (n % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
  for (int k = (n % 2 == 0) ? 2 : 1; k + 2 <= n; k += 2) g *= 0.5 * k;
  return g;
}

double sphere_measure(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / gamma_half(n);
}

const Constants& Constants::of(int n) {
  static const auto table = [] {
    std::array<Constants, kMaxCoords + 1> t{};
    for (int m = 2; m <= kMaxCoords; ++m) {
      Constants& k = t[m];
      k.dim = m;
      k.sigma = sphere_measure(m);
      k.c = 1.0 / (k.sigma * std::max(m - 2, 1));
      k.c_prime = 2.0 / k.sigma;
    }
    return t;
  }();
  if (n < 2 || n > kMaxCoords) throw std::invalid_argument("dimension out of range");
  return table[n];
}

namespace {

void check_pair(const HalfSpacePoint& x, const HalfSpacePoint& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("points of different dimension");
}

}  // namespace

AuxA aux_a(const HalfSpacePoint& x, const HalfSpacePoint& y, Regularization eps) {
  check_pair(x, y);
  const int n = x.dim();
  double t = 0;
  for (int i = 0; i + 1 < n; ++i) {
    const double d = x[i] - y[i];
    t += d * d;
  }
  const double e2 = eps.eps * eps.eps;
  const double xn = x.height(), yn = y.height();
  const double dm = xn - yn, dp = xn + yn;
  return {e2 + t + dp * dp, e2 + t + dm * dm};
}

double fundamental(const HalfSpacePoint& x, const HalfSpacePoint& y, Regularization eps) {
  check_pair(x, y);
  const double a = eps.eps * eps.eps + dist2(x, y);
  if (a == 0) throw CoincidentPoints();
  const Constants& k = Constants::of(x.dim());
  if (x.dim() == 2) return -0.5 * k.c * std::log(a);
  return k.c * std::pow(a, -0.5 * (x.dim() - 2));
}

double green(const HalfSpacePoint& x, const HalfSpacePoint& y, Regularization eps) {
  const auto [a1, a2] = aux_a(x, y, eps);
  if (a2 == 0) throw CoincidentPoints();
  const double d = 4.0 * x.height() * y.height();
  if (d == 0) return 0.0;
  const int n = x.dim();
  const Constants& k = Constants::of(n);
  if (n == 2) return 0.5 * k.c * std::log1p(d / a2);
  // a2^{-p} - a1^{-p} = (d/a1) * S(r) / (a2^p (1 + r^p)),  r = a2/a1,
  // S(r) = sum_{k=0}^{N-3} r^k, p = (N-2)/2.
  const double r = a2 / a1;
  const double p = 0.5 * (n - 2);
  double s = 0, rk = 1;
  for (int i = 0; i <= n - 3; ++i) {
    s += rk;
    rk *= r;
  }
  const double rp = (n % 2 == 0) ? std::pow(r, static_cast<int>(p)) : std::pow(r, p);
  const double a2p = (n % 2 == 0) ? std::pow(a2, static_cast<int>(p)) : std::pow(a2, p);
  return k.c * (d / a1) * s / (a2p * (1.0 + rp));
}

double poisson(const HalfSpacePoint& x, const BoundaryPoint& yprime, Regularization eps) {
  if (yprime.size() != x.dim() - 1) throw std::invalid_argument("boundary point of wrong dimension");
  const int n = x.dim();
  double t = eps.eps * eps.eps + x.height() * x.height();
  for (int i = 0; i + 1 < n; ++i) {
    const double d = x[i] - yprime[i];
    t += d * d;
  }
  return Constants::of(n).c_prime * x.height() * std::pow(t, -0.5 * n);
}

double inv_power_gap(double a1, double d, double q) {
  // a1^{-q} - (a1 - d)^{-q} = a1^{-q} * (1 - (1 - d/a1)^{-q})
  return -std::pow(a1, -q) * std::expm1(-q * std::log1p(-d / a1));
}

Coords grad_green(const HalfSpacePoint& x, const HalfSpacePoint& y, Regularization eps) {
  const auto [a1, a2] = aux_a(x, y, eps);
  if (a2 == 0) throw CoincidentPoints();
  const int n = x.dim();
  const double half_cp = 0.5 * Constants::of(n).c_prime;
  const double q = 0.5 * n;
  const double xn = x.height(), yn = y.height();
  const double gap = inv_power_gap(a1, 4.0 * xn * yn, q);  // a1^{-q} - a2^{-q}
  Coords g(n);
  for (int j = 0; j + 1 < n; ++j) g[j] = half_cp * gap * (y[j] - x[j]);
  // (y_N + x_N) a1^{-q} - (y_N - x_N) a2^{-q}
  g[n - 1] = half_cp * (yn * gap + xn * (std::pow(a1, -q) + std::pow(a2, -q)));
  return g;
}

RingMembership in_level_ring(const HalfSpacePoint& x, const HalfSpacePoint& y, double R) {
  if (!(R > 0)) throw std::invalid_argument("ring level must be positive");
  if (y.height() <= 0) return {false, false};
  double g;
  try {
    g = green(x, y);
  } catch (const CoincidentPoints&) {
    return {true, true};  // the pole belongs to every Omega_r
  }
  return {g > 1.0 / R, g > 0.5 / R};
}

}  // namespace hsp
