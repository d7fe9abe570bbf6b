#pragma once
// Closed forms written out independently of the library, for cross-checks.

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

namespace oracle {

inline double sphere_area(int n) { return 2 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0); }

inline double dist(const std::vector<double>& a, const std::vector<double>& b, bool mirror_b = false) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double bi = (mirror_b && i + 1 == a.size()) ? -b[i] : b[i];
    s += (a[i] - bi) * (a[i] - bi);
  }
  return std::sqrt(s);
}

// Dirichlet Green function of the half-space via the image charge.
inline double green(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  const double r = dist(x, y), rm = dist(x, y, true);
  if (n == 2) return std::log(rm / r) / (2 * std::numbers::pi);
  return (std::pow(r, 2.0 - n) - std::pow(rm, 2.0 - n)) / ((n - 2) * sphere_area(n));
}

// Poisson kernel 2 x_N / (sigma_N |x - y'|^N).
inline double poisson(const std::vector<double>& x, const std::vector<double>& yp) {
  const int n = static_cast<int>(x.size());
  std::vector<double> y(yp);
  y.push_back(0);
  return 2 * x.back() / (sphere_area(n) * std::pow(dist(x, y), n));
}

// Re w(x + i y) for y > 0 (Voigt profile), from the Fourier representation
// Re w = pi^{-1/2} \int_0^inf exp(-t^2/4 - y t) cos(x t) dt. For N = 2 this is
// the Poisson integral of exp(-t^2).
inline double voigt(double x, double y) {
  boost::math::quadrature::exp_sinh<double> q;
  const double v = q.integrate([&](double t) { return std::exp(-t * t / 4 - y * t) * std::cos(x * t); });
  return v / std::sqrt(std::numbers::pi);
}

}  // namespace oracle
