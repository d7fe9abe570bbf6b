#include "hsp/rings.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "hsp/domains.hpp"
#include "hsp/kernels.hpp"
#include "hsp/report.hpp"

namespace hsp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Records the first non-finite field value seen by an integrand so the caller
// can return it as a sentinel instead of a quadrature failure.
struct Sentinel {
  std::atomic<bool> hit{false};
  double value = kNaN;

  double guard(double v) {
    if (std::isfinite(v)) return v;
    bool expected = false;
    if (hit.compare_exchange_strong(expected, true)) value = v;
    return 0.0;
  }
};

double run(const std::vector<Piece>& pieces, const QuadratureSpec& q, const Sentinel& s, const char* what) {
  const double v = integrate_checked(pieces, q, what).value;
  if (s.hit) return std::isnan(s.value) ? kNaN : s.value;
  return v;
}

void check_radius(const HalfSpacePoint& x, double R) {
  if (!x.interior()) throw std::invalid_argument("ring center must be interior");
  if (!(R > 0) || !std::isfinite(R)) throw std::invalid_argument("ring radius must be positive");
}

}  // namespace

std::string to_string(RingCondition c) {
  switch (c) {
    case RingCondition::classical: return "r";
    case RingCondition::ring_plus: return "r-plus";
    case RingCondition::ring_plus_zero: return "r-plus-0";
    case RingCondition::ball_limit: return "ball-limit";
    case RingCondition::green_ring: return "green-ring";
    case RingCondition::ring_equivalent: return "ring-d";
  }
  return "?";
}

RingCondition parse_condition(const std::string& s) {
  for (auto c : {RingCondition::classical, RingCondition::ring_plus, RingCondition::ring_plus_zero,
                 RingCondition::ball_limit, RingCondition::green_ring, RingCondition::ring_equivalent})
    if (to_string(c) == s) return c;
  throw std::invalid_argument("unknown ring condition '" + s + "' (r, r-plus, r-plus-0, ball-limit, green-ring, ring-d)");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::satisfied: return "satisfied";
    case Verdict::not_satisfied: return "not-satisfied";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

double ring_plus_integral(const ScalarField& u, double h, const HalfSpacePoint& x, double R, const QuadratureSpec& q) {
  check_radius(x, R);
  const int n = x.dim();
  auto s = std::make_shared<Sentinel>();
  auto pieces = cylinder_annulus(
      x, R,
      [&u, h, n, s](const Coords& y) {
        const double v = s->guard(u(HalfSpacePoint(y)));
        return y[n - 1] * std::abs(v - h * y[n - 1]);
      },
      u.singular);
  return run(pieces, q, *s, "ring_plus_integral") / std::pow(R, n + 2);
}

double ball_limit_integral(const ScalarField& u, double h, const HalfSpacePoint& x, double R, const QuadratureSpec& q) {
  check_radius(x, R);
  const int n = x.dim();
  auto s = std::make_shared<Sentinel>();
  auto pieces = cylinder_ball(
      x, R,
      [&u, h, n, s](const Coords& y) {
        if (!(y[n - 1] > 0)) return 0.0;
        const double v = s->guard(u(HalfSpacePoint(y)));
        return y[n - 1] * std::abs(v - h * y[n - 1]);
      },
      u.singular);
  return run(pieces, q, *s, "ball_limit_integral") / std::pow(R, n + 2);
}

double classical_ring_integral(const ScalarField& u, double l, const HalfSpacePoint& x, double R,
                               const QuadratureSpec& q) {
  check_radius(x, R);
  const int n = x.dim();
  auto s = std::make_shared<Sentinel>();
  auto pieces = euclidean_shell(
      x, R, 2 * R,
      [&u, l, n, s](const Coords& y) {
        if (!(y[n - 1] > 0)) return std::abs(l);
        return std::abs(s->guard(u(HalfSpacePoint(y))) - l);
      },
      [l](const Coords&) { return std::abs(l); }, u.singular);
  return run(pieces, q, *s, "classical_ring_integral") / std::pow(R, n);
}

double level_distance(const HalfSpacePoint& x, const double* dir, double level) {
  const int n = x.dim();
  const double xn = x.height();
  const Constants& k = Constants::of(n);
  auto at = [&](double t) {
    HalfSpacePoint y = x;
    for (int i = 0; i < n; ++i) y[i] += t * dir[i];
    return y;
  };
  // G < level once t^N > K (x_N + t) with K = C' x_N / level
  const double K = k.c_prime * xn / level;
  double t_hi = std::pow(K * xn, 1.0 / n);
  for (int i = 0; i < 200; ++i) {
    const double next = std::pow(K * (xn + t_hi), 1.0 / n);
    if (std::abs(next - t_hi) <= 1e-15 * next) break;
    t_hi = next;
  }
  t_hi *= 1.0 + 1e-9;
  if (dir[n - 1] < 0) t_hi = std::min(t_hi, xn / -dir[n - 1]);
  auto f = [&](double t) {
    const HalfSpacePoint y = at(t);
    if (!(y.height() > 0)) return -1.0;
    return green(x, y) / level - 1.0;
  };
  double t_lo = 0.5 * t_hi;
  for (int i = 0; i < 1100 && f(t_lo) <= 0; ++i) t_lo *= 0.5;
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, t_lo, t_hi, f(t_lo), f(t_hi),
                                                   boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

Box level_set_box(const HalfSpacePoint& x, double r) {
  const int n = x.dim();
  const double xn = x.height();
  const double K = Constants::of(n).c_prime * xn * r;
  // |x - y|^N < K y_N and y_N <= x_N + |x - y|
  double y = xn;
  for (int i = 0; i < 500; ++i) {
    const double next = xn + std::pow(K * y, 1.0 / n);
    if (std::abs(next - y) <= 1e-15 * next) break;
    y = next;
  }
  y *= 1.0 + 1e-9;
  const double rho = std::pow(K * y, 1.0 / n);
  Coords lo(n), hi(n);
  for (int i = 0; i + 1 < n; ++i) {
    lo[i] = x[i] - rho;
    hi[i] = x[i] + rho;
  }
  lo[n - 1] = 0.0;
  hi[n - 1] = y;
  return Box(lo, hi);
}

namespace {

// \int over the level ring Omega_{2R} \ Omega_R of weight(y) * w(y), in
// coordinates (s, direction): y = x + t dir, t = t_R + s (t_2R - t_R).
double level_ring(const HalfSpacePoint& x, double R, std::function<double(const Coords&, double)> f,
                  const std::vector<Coords>& hints, const QuadratureSpec& q, const char* what) {
  check_radius(x, R);
  const int n = x.dim();
  const auto sphere = std::make_shared<const SphereParam>(n);
  const int na = sphere->angles();
  const auto fn = std::make_shared<const std::function<double(const Coords&, double)>>(std::move(f));
  Coords lo(na + 1), hi(na + 1);
  lo[0] = 0.0;
  hi[0] = 1.0;
  for (int k = 0; k < na; ++k) {
    lo[1 + k] = sphere->lo(k);
    hi[1 + k] = sphere->hi(k);
  }
  Piece p;
  p.box = Box(lo, hi);
  p.f = [fn, sphere, x, n, na, R](std::span<const double> u) {
    double dir[kMaxCoords];
    const double jac = sphere->map(u.subspan(1, na), 0, dir);
    if (jac == 0) return 0.0;
    const double t1 = level_distance(x, dir, 1.0 / R);
    const double t2 = level_distance(x, dir, 0.5 / R);
    const double t = t1 + u[0] * (t2 - t1);
    Coords y(n);
    for (int i = 0; i < n; ++i) y[i] = x[i] + t * dir[i];
    if (!(y[n - 1] > 0)) return 0.0;
    return (*fn)(y, t) * jac * std::pow(t, n - 1) * (t2 - t1);
  };
  for (const Coords& h : hints) {
    Coords v(n);
    for (int i = 0; i < n; ++i) v[i] = h[i] - x[i];
    const double t = v.norm();
    if (!(t > 0)) continue;
    for (int i = 0; i < n; ++i) v[i] /= t;
    const double t1 = level_distance(x, v.data(), 1.0 / R);
    const double t2 = level_distance(x, v.data(), 0.5 / R);
    if (t < t1 || t > t2) continue;
    double ang[kMaxCoords];
    sphere->invert(v.span(), ang);
    Coords c(na + 1);
    c[0] = (t - t1) / (t2 - t1);
    for (int k = 0; k < na; ++k) c[1 + k] = ang[k];
    p.singular.push_back(c);
  }
  return integrate_checked(std::span<const Piece>(&p, 1), q, what).value;
}

}  // namespace

double green_ring_integral(const ScalarField& u, const HalfSpacePoint& x, double R, const QuadratureSpec& q) {
  auto s = std::make_shared<Sentinel>();
  const double v = level_ring(
      x, R,
      [&u, x, s](const Coords& y, double) {
        const HalfSpacePoint p(y);
        const double g = green(x, p);
        const double g2 = grad_green(x, p).norm2();
        return g2 / g * s->guard(u(p));
      },
      u.singular, q, "green_ring_integral");
  if (s->hit) return s->value;
  return v / std::numbers::ln2;
}

double ring_equivalent_integral(const ScalarField& u, double l, const HalfSpacePoint& x, double R,
                                const QuadratureSpec& q) {
  const int n = x.dim();
  auto s = std::make_shared<Sentinel>();
  const double v = level_ring(
      x, R,
      [&u, l, n, s](const Coords& y, double t) {
        return std::pow(t, -2 * n) * std::abs(s->guard(u(HalfSpacePoint(y))) - l);
      },
      u.singular, q, "ring_equivalent_integral");
  if (s->hit) return s->value;
  return R * v;
}

namespace {

double fit_slope(const std::vector<double>& R, const std::vector<double>& I, std::size_t end, int window) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = end; k-- > 0 && static_cast<int>(pts.size()) < window;) {
    if (!(I[k] > 0) || !std::isfinite(I[k])) break;
    pts.emplace_back(std::log(R[k]), std::log(I[k]));
  }
  if (static_cast<int>(pts.size()) < window) return kNaN;
  double mx = 0, my = 0;
  for (auto [a, b] : pts) {
    mx += a;
    my += b;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxy = 0, sxx = 0;
  for (auto [a, b] : pts) {
    sxy += (a - mx) * (b - my);
    sxx += (a - mx) * (a - mx);
  }
  return sxy / sxx;
}

}  // namespace

RingScanReport scan(const ScalarField& u, double h_or_l, const HalfSpacePoint& x, RingCondition c,
                    const ScanOptions& opt, const QuadratureSpec& q) {
  if (opt.levels < 4) throw std::invalid_argument("scan needs at least 4 levels");
  if (opt.window < 2) throw std::invalid_argument("scan window must be at least 2");
  RingScanReport rep;
  rep.condition = c;
  rep.center = x;
  rep.h = c == RingCondition::ring_plus_zero ? 0.0 : h_or_l;
  const double R0 = opt.R0 > 0 ? opt.R0 : std::max(4.0, 2.5 * x.height());
  const int L = opt.levels;
  rep.R.resize(L);
  rep.I.assign(L, kNaN);
  for (int k = 0; k < L; ++k) rep.R[k] = std::ldexp(R0, k);

  const bool par = q.exec == Execution::parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (int k = 0; k < L; ++k) {
    double v = kNaN;
    try {
      switch (c) {
        case RingCondition::classical: v = classical_ring_integral(u, rep.h, x, rep.R[k], q); break;
        case RingCondition::ring_plus:
        case RingCondition::ring_plus_zero: v = ring_plus_integral(u, rep.h, x, rep.R[k], q); break;
        case RingCondition::ball_limit: v = ball_limit_integral(u, rep.h, x, rep.R[k], q); break;
        case RingCondition::green_ring: v = green_ring_integral(u, x, rep.R[k], q); break;
        case RingCondition::ring_equivalent: v = ring_equivalent_integral(u, rep.h, x, rep.R[k], q); break;
      }
    } catch (const QuadratureFailure&) {
      v = kNaN;
    }
    rep.I[k] = v;
  }

  double m = kInf;
  for (int k = 0; k < L; ++k) {
    if (std::isfinite(rep.I[k])) m = std::min(m, rep.I[k]);
    rep.cummin.push_back(m);
    rep.slope.push_back(fit_slope(rep.R, rep.I, k + 1, opt.window));
  }
  rep.min_value = m;
  rep.fitted_slope = rep.slope.back();
  double scale = 0;
  try {
    scale = std::abs(u(x));
  } catch (const std::exception&) {
  }
  scale = std::max(scale, std::abs(rep.h) * x.height());
  rep.scale = std::isfinite(scale) && scale > 0 ? scale : 1.0;
  const double tol = opt.verdict_tol * rep.scale;

  const bool any_nan = std::any_of(rep.I.begin(), rep.I.end(), [](double v) { return !std::isfinite(v); });
  bool trailing_zero = true;
  for (int k = std::max(0, L - opt.window); k < L; ++k) trailing_zero = trailing_zero && rep.I[k] == 0.0;
  const double s = rep.fitted_slope;

  if (c == RingCondition::green_ring) {
    // finite liminf: the trailing values must settle rather than grow
    const double a = rep.I[L - 2], b = rep.I[L - 1];
    if (!std::isfinite(a) || !std::isfinite(b)) rep.verdict = Verdict::inconclusive;
    else if (std::abs(b - a) <= std::max(0.05 * std::abs(b), tol) || (std::isfinite(s) && s < -0.25))
      rep.verdict = Verdict::satisfied;
    else if (std::isfinite(s) && s > 0.25) rep.verdict = Verdict::not_satisfied;
    else rep.verdict = Verdict::inconclusive;
  } else if (trailing_zero) {
    rep.verdict = Verdict::satisfied;
  } else if (any_nan && !std::isfinite(s)) {
    rep.verdict = Verdict::inconclusive;
  } else if (m <= tol && s < -0.25) {
    rep.verdict = Verdict::satisfied;
  } else if (m >= 10 * tol && s >= -0.05) {
    rep.verdict = Verdict::not_satisfied;
  } else {
    rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

std::string to_csv(const RingScanReport& r) {
  std::ostringstream os;
  os << "k,R,I,cumulative_min,slope\n";
  for (std::size_t k = 0; k < r.R.size(); ++k)
    os << k << ',' << fmt(r.R[k]) << ',' << fmt(r.I[k]) << ',' << fmt(r.cummin[k]) << ',' << fmt(r.slope[k]) << '\n';
  return os.str();
}

nlohmann::json to_json(const RingScanReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < r.R.size(); ++k)
    rows.push_back({{"k", k}, {"R", jnum(r.R[k])}, {"I", jnum(r.I[k])}, {"cumulative_min", jnum(r.cummin[k])},
                    {"slope", jnum(r.slope[k])}});
  nlohmann::json c = nlohmann::json::array();
  for (int i = 0; i < r.center.dim(); ++i) c.push_back(r.center[i]);
  return {{"condition", to_string(r.condition)}, {"center", c},           {"h", r.h},
          {"rows", rows},                        {"slope", jnum(r.fitted_slope)}, {"min", jnum(r.min_value)},
          {"scale", r.scale},                    {"verdict", to_string(r.verdict)}};
}

}  // namespace hsp
