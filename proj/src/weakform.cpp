#include "hsp/weakform.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hsp/domains.hpp"
#include "hsp/report.hpp"

namespace hsp {

using nlohmann::json;

namespace {

// Radial profile written as f(q), q = |y' - c|^2; returns f, f', f''.
void radial(const Profile& p, double q, double& f, double& f1, double& f2) {
  const double w2 = p.width * p.width;
  const double s = 1 - q / w2;
  if (s <= 0) {
    f = f1 = f2 = 0;
    return;
  }
  const double b = s * s * s * s, b1 = -4 * s * s * s / w2, b2 = 12 * s * s / (w2 * w2);
  if (p.kind == Profile::Kind::bump) {
    f = b, f1 = b1, f2 = b2;
    return;
  }
  const double g2 = p.gauss * p.gauss;
  const double e = std::exp(-q / g2);
  f = e * b;
  f1 = e * (b1 - b / g2);
  f2 = e * (b2 - 2 * b1 / g2 + b / (g2 * g2));
}

bool boxed(const Coords& lo, const Coords& hi, const Coords& p) {
  for (int i = 0; i < p.size(); ++i)
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  return true;
}

std::vector<Coords> inside(const Box& b, const std::vector<Coords>& pts) {
  std::vector<Coords> out;
  for (const Coords& p : pts)
    if (p.size() == b.dim() && boxed(b.lo, b.hi, p)) out.push_back(p);
  return out;
}

std::optional<Box> intersect(const Box& a, const std::optional<Box>& b) {
  if (!b) return a;
  Box c = a;
  for (int i = 0; i < a.dim(); ++i) {
    c.lo[i] = std::max(a.lo[i], b->lo[i]);
    c.hi[i] = std::min(a.hi[i], b->hi[i]);
    if (!(c.lo[i] < c.hi[i])) return std::nullopt;
  }
  return c;
}

double pair_part(const MeasurePart& part, const std::function<double(const Coords&)>& g, const Box& support,
                 const QuadratureSpec& q, const char* what) {
  double s = 0;
  for (const Atom& a : part.atoms)
    if (boxed(support.lo, support.hi, a.loc)) s += a.w * g(a.loc);
  for (const Density& d : part.densities) {
    auto region = intersect(support, d.support);
    if (!region) continue;
    Piece p{*region,
            [&g, &d](std::span<const double> y) {
              const Coords c(y);
              return g(c) * d(c);
            },
            inside(*region, d.peaks),
            {}};
    s += integrate_checked(std::span<const Piece>(&p, 1), q, what).value;
  }
  return s;
}

}  // namespace

double Profile::operator()(const Coords& yp) const {
  double f, f1, f2;
  radial(*this, dist2(yp, center), f, f1, f2);
  return f;
}

double Profile::derivs(const Coords& yp, Coords& grad, double& lap) const {
  const int d = center.size();
  const double q = dist2(yp, center);
  double f, f1, f2;
  radial(*this, q, f, f1, f2);
  grad = Coords(d);
  for (int i = 0; i < d; ++i) grad[i] = 2 * f1 * (yp[i] - center[i]);
  lap = 2 * d * f1 + 4 * q * f2;
  return f;
}

double Profile::sup_gradient() const {
  // |grad psi| = 2 r |f'(r^2)|, radial: dense scan plus golden refinement.
  auto g = [this](double r) {
    double f, f1, f2;
    radial(*this, r * r, f, f1, f2);
    return 2 * r * std::abs(f1);
  };
  const int m = 4096;
  int best = 0;
  double gb = 0;
  for (int i = 0; i <= m; ++i) {
    const double v = g(width * i / m);
    if (v > gb) gb = v, best = i;
  }
  double a = width * std::max(best - 1, 0) / m, b = width * std::min(best + 1, m) / m;
  const double phi = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 80; ++it) {
    const double c = b - phi * (b - a), e = a + phi * (b - a);
    if (g(c) > g(e))
      b = e;
    else
      a = c;
  }
  return std::max(gb, g(0.5 * (a + b)));
}

Box Profile::support() const {
  Coords lo = center, hi = center;
  for (int i = 0; i < center.size(); ++i) lo[i] -= width, hi[i] += width;
  return Box(lo, hi);
}

// chi(t) = 1 - S(t - 1), S(z) = 35z^4 - 84z^5 + 70z^6 - 20z^7.
double cutoff(double t) {
  if (t <= 1) return 1;
  if (t >= 2) return 0;
  const double z = t - 1;
  return 1 - z * z * z * z * (35 + z * (-84 + z * (70 - 20 * z)));
}

double cutoff_d1(double t) {
  if (t <= 1 || t >= 2) return 0;
  const double z = t - 1;
  return -140 * z * z * z * (1 - z) * (1 - z) * (1 - z);
}

double cutoff_d2(double t) {
  if (t <= 1 || t >= 2) return 0;
  const double z = t - 1;
  return -420 * z * z * (1 - z) * (1 - z) * (1 - 2 * z);
}

TestFunction make_test_function(const Profile& psi, double scale) {
  if (!(scale > 0) || !(psi.width > 0)) throw std::invalid_argument("test function scales must be positive");
  const int n = psi.center.size() + 1;
  TestFunction t;
  t.dim = n;
  t.profile = psi;
  std::ostringstream name;
  name << (psi.kind == Profile::Kind::bump ? "bump" : "gauss-bump") << "(w=" << psi.width << ",s=" << scale << ")";
  t.name = name.str();
  auto tang = [n](const HalfSpacePoint& x) {
    Coords c(n - 1);
    for (int i = 0; i + 1 < n; ++i) c[i] = x[i];
    return c;
  };
  t.phi = [psi, scale, tang](const HalfSpacePoint& x) {
    const double h = x.height();
    return h * psi(tang(x)) * cutoff(h / scale);
  };
  t.grad = [psi, scale, tang, n](const HalfSpacePoint& x) {
    const double h = x.height();
    Coords g;
    double lap;
    const double p = psi.derivs(tang(x), g, lap);
    const double chi = cutoff(h / scale);
    Coords out(n);
    for (int i = 0; i + 1 < n; ++i) out[i] = h * chi * g[i];
    out[n - 1] = p * (chi + h * cutoff_d1(h / scale) / scale);
    return out;
  };
  t.laplacian = [psi, scale, tang](const HalfSpacePoint& x) {
    const double h = x.height(), s = h / scale;
    Coords g;
    double lap;
    const double p = psi.derivs(tang(x), g, lap);
    return h * cutoff(s) * lap + p * (2 * cutoff_d1(s) / scale + h * cutoff_d2(s) / (scale * scale));
  };
  t.normal_derivative = [psi](const Coords& yp) { return psi(yp); };
  Box b = psi.support();
  Coords lo(n), hi(n);
  for (int i = 0; i + 1 < n; ++i) lo[i] = b.lo[i], hi[i] = b.hi[i];
  lo[n - 1] = 0;
  hi[n - 1] = 2 * scale;
  t.support = Box(lo, hi);
  return t;
}

TestFunction box_test_function(const Box& box) {
  const int n = box.dim();
  if (n < 2 || !(box.lo[n - 1] > 0)) throw std::invalid_argument("box test function needs a box inside the half-space");
  TestFunction t;
  t.dim = n;
  t.name = "box-quadratic";
  t.support = box;
  auto factors = [box, n](const HalfSpacePoint& x, double* f) {
    for (int i = 0; i < n; ++i) f[i] = (x[i] - box.lo[i]) * (box.hi[i] - x[i]);
  };
  t.phi = [box, n, factors](const HalfSpacePoint& x) {
    if (!boxed(box.lo, box.hi, x.coords())) return 0.0;
    double f[kMaxDim], p = 1;
    factors(x, f);
    for (int i = 0; i < n; ++i) p *= f[i];
    return p;
  };
  t.grad = [box, n, factors](const HalfSpacePoint& x) {
    double f[kMaxDim];
    factors(x, f);
    Coords g(n);
    for (int i = 0; i < n; ++i) {
      double p = box.lo[i] + box.hi[i] - 2 * x[i];
      for (int j = 0; j < n; ++j)
        if (j != i) p *= f[j];
      g[i] = p;
    }
    return g;
  };
  t.laplacian = [box, n, factors](const HalfSpacePoint& x) {
    if (!boxed(box.lo, box.hi, x.coords())) return 0.0;
    double f[kMaxDim], s = 0;
    factors(x, f);
    for (int i = 0; i < n; ++i) {
      double p = -2;
      for (int j = 0; j < n; ++j)
        if (j != i) p *= f[j];
      s += p;
    }
    return s;
  };
  t.normal_derivative = [](const Coords&) { return 0.0; };
  return t;
}

std::vector<TestFunction> standard_battery(int n) {
  if (n < 2 || n > kMaxDim) throw std::invalid_argument("dimension out of range");
  const int d = n - 1;
  struct Spec {
    Profile::Kind kind;
    double shift0, shift1, width;
  };
  const Spec specs[5] = {{Profile::Kind::bump, 0.0, 0.0, 1.0},
                         {Profile::Kind::gauss_bump, 0.7, 0.0, 0.6},
                         {Profile::Kind::bump, -0.7, 0.3, 0.8},
                         {Profile::Kind::gauss_bump, 0.0, -0.5, 1.2},
                         {Profile::Kind::bump, 0.4, 0.4, 0.5}};
  std::vector<TestFunction> out;
  for (double scale : {0.5, 1.0})
    for (const Spec& s : specs) {
      Profile p;
      p.kind = s.kind;
      p.center = Coords(d);
      p.center[0] = s.shift0;
      if (d > 1) p.center[1] = s.shift1;
      p.width = s.width;
      p.gauss = 0.5 * s.width;
      out.push_back(make_test_function(p, scale));
    }
  return out;
}

double pair_interior(const InteriorMeasure& mu, const TestFunction& t, const QuadratureSpec& q) {
  auto g = [&t](const Coords& y) { return t.phi(HalfSpacePoint(y)); };
  return pair_part(mu.positive, g, t.support, q, "interior pairing") -
         pair_part(mu.negative, g, t.support, q, "interior pairing");
}

double pair_boundary(const BoundaryMeasure& nu, const std::function<double(const Coords&)>& psi, const Box& support,
                     const QuadratureSpec& q) {
  return pair_part(nu.positive, psi, support, q, "boundary pairing") -
         pair_part(nu.negative, psi, support, q, "boundary pairing");
}

namespace {

Box tangential(const Box& b) {
  const int n = b.dim();
  Coords lo(n - 1), hi(n - 1);
  for (int i = 0; i + 1 < n; ++i) lo[i] = b.lo[i], hi[i] = b.hi[i];
  return Box(lo, hi);
}

std::vector<Coords> hints_for(const ScalarField& u, const Box& b) {
  std::vector<Coords> pts = inside(b, u.singular);
  const int n = b.dim();
  for (const Coords& f : u.boundary_features) {
    Coords c(n);
    for (int i = 0; i + 1 < n; ++i) c[i] = f[i];
    c[n - 1] = b.lo[n - 1];
    if (b.lo[n - 1] == 0 && boxed(b.lo, b.hi, c)) pts.push_back(c);
  }
  return pts;
}

std::vector<Piece> support_pieces(const TestFunction& t, PointFn f, const std::vector<Coords>& hints) {
  if (!t.profile) return {Piece{t.support, [f](std::span<const double> y) { return f(Coords(y)); }, hints, {}}};
  // Product form: cylinder coordinates about the profile centre, so the
  // edge of the profile support is a coordinate face; the cut-off starts
  // halfway up the support.
  const int n = t.dim;
  const double top = t.support.hi[n - 1];
  auto pieces = cylinder_region(HalfSpacePoint(t.profile->center.span(), 1.0), 0.0, t.profile->width, 0.0, top,
                                std::move(f), hints);
  for (Piece& p : pieces) p.breaks.emplace_back(p.box.dim() - 1, 0.5 * top);
  return pieces;
}

WeakResidualRow one_residual(const ScalarField& u, const InteriorMeasure& mu, const BoundaryMeasure& nu,
                             const TestFunction& t, const QuadratureSpec& q, WeakMode mode) {
  WeakResidualRow row;
  row.name = t.name;
  const auto pieces = support_pieces(
      t,
      [&u, &t](const Coords& y) {
        const HalfSpacePoint x(y);
        if (!(x.height() > 0)) return 0.0;
        const double l = t.laplacian(x);
        if (l == 0) return 0.0;
        return -u(x) * l;
      },
      hints_for(u, t.support));
  // The pairing cancels (it vanishes for u = h x_N), so the tolerance is
  // taken relative to \int |u Laplacian phi|, which is also in the scale.
  QuadratureSpec qa = q;
  qa.l1_fraction = 1;
  const CubatureResult c = integrate_checked(pieces, qa, "weak residual");
  row.lhs = c.value;
  row.rhs_mu = pair_interior(mu, t, q);
  row.rhs_nu = pair_boundary(nu, t.normal_derivative, tangential(t.support), q);
  const double rhs = row.rhs_mu + row.rhs_nu;
  row.scale = std::max({std::abs(row.lhs), std::abs(row.rhs_mu), std::abs(row.rhs_nu), c.l1, q.abs_floor});
  const double diff = mode == WeakMode::equality ? std::abs(row.lhs - rhs) : std::max(rhs - row.lhs, 0.0);
  row.residual = diff / row.scale;
  return row;
}

}  // namespace

WeakResidualReport weak_residual(const ScalarField& u, const InteriorMeasure& mu, const BoundaryMeasure& nu,
                                 const std::vector<TestFunction>& tests, const QuadratureSpec& q, WeakMode mode) {
  if (mu.dim != u.dim || nu.dim != u.dim) throw std::invalid_argument("measure and field dimensions differ");
  for (const TestFunction& t : tests)
    if (t.dim != u.dim) throw std::invalid_argument("test function dimension differs from the field");
  WeakResidualReport r;
  r.mode = mode;
  r.rows.resize(tests.size());
  std::vector<std::exception_ptr> errors(tests.size());
  QuadratureSpec inner = q;
  const bool par = q.exec == Execution::parallel && tests.size() > 1;
  if (par) inner.exec = Execution::serial;
#pragma omp parallel for schedule(dynamic) if (par)
  for (std::size_t i = 0; i < tests.size(); ++i) {
    try {
      r.rows[i] = one_residual(u, mu, nu, tests[i], inner, mode);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (const auto& row : r.rows) r.max_residual = std::max(r.max_residual, row.residual);
  return r;
}

std::vector<double> default_ladder() {
  std::vector<double> l;
  for (int k = 0; k <= 6; ++k) l.push_back(0.1 * std::pow(10.0, -0.5 * k));
  return l;
}

TraceReport lim_trace(const ScalarField& u, const Profile& psi, const std::vector<double>& ladder,
                      const QuadratureSpec& q) {
  if (psi.center.size() + 1 != u.dim) throw std::invalid_argument("profile dimension differs from the field");
  if (ladder.size() < 2) throw std::invalid_argument("trace ladder needs at least two heights");
  for (std::size_t k = 0; k < ladder.size(); ++k)
    if (!(ladder[k] > 0) || (k > 0 && !(ladder[k] < ladder[k - 1])))
      throw std::invalid_argument("trace ladder must be positive and strictly decreasing");
  TraceReport r;
  r.psi = psi;
  r.eps = ladder;
  r.values.resize(ladder.size());
  const Box b = psi.support();
  const double size = 2 * psi.width;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const double eps = ladder[k];
    std::vector<Coords> pts;
    for (const Coords& f : u.boundary_features)
      if (boxed(b.lo, b.hi, f)) pts.push_back(f);
    for (const Coords& s : u.singular) {
      Coords c(s.size() - 1);
      for (int i = 0; i < c.size(); ++i) c[i] = s[i];
      if (s[s.size() - 1] < 4 * eps && boxed(b.lo, b.hi, c)) pts.push_back(c);
    }
    QuadratureSpec qk = q;
    qk.singular_shell_radius = std::min(q.singular_shell_radius, 0.05 * eps / size);
    Piece p{b,
            [&u, &psi, eps](std::span<const double> y) {
              const Coords c(y);
              const double w = psi(c);
              if (w == 0) return 0.0;
              return w * u(HalfSpacePoint(y, eps));
            },
            pts,
            {}};
    r.values[k] = integrate_checked(std::span<const Piece>(&p, 1), qk, "trace pairing").value;
  }
  // T_eps ~ T_0 + a eps: extrapolate from consecutive pairs.
  auto rich = [&r](std::size_t k) {
    const double rho = r.eps[k] / r.eps[k - 1];
    return (r.values[k] - rho * r.values[k - 1]) / (1 - rho);
  };
  const std::size_t m = ladder.size() - 1;
  r.limit = rich(m);
  r.error = m >= 2 ? std::abs(rich(m) - rich(m - 1)) : std::abs(r.values[m] - r.values[m - 1]);
  bool mono = true;
  for (std::size_t k = 1; k < r.values.size(); ++k)
    if (!(std::abs(r.values[k]) > std::abs(r.values[k - 1]))) mono = false;
  r.diverges = mono && std::abs(r.values.back()) >= 10 * std::abs(r.values.front());
  if (r.diverges) {
    r.limit = std::copysign(kInfinity, r.values.back());
    r.error = kInfinity;
  }
  return r;
}

namespace {

double mollifier_norm() {
  static const double z = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [](double x) { return std::abs(x) < 1 ? std::exp(-1 / (1 - x * x)) : 0.0; }, -1.0, 1.0, 15, 1e-15);
  return z;
}

}  // namespace

double mollifier(double s) { return std::abs(s) < 1 ? std::exp(-1 / (1 - s * s)) / mollifier_norm() : 0.0; }

namespace {

// \int m_1(s) g(s) ds on (-1, 1).
double against_m1(const std::function<double(double)>& g, const QuadratureSpec& q) {
  Piece p{Box(Coords{-1.0}, Coords{1.0}), [&g](std::span<const double> s) { return mollifier(s[0]) * g(s[0]); }, {}, {}};
  return integrate_checked(std::span<const Piece>(&p, 1), q, "counterexample pairing").value;
}

}  // namespace

std::vector<CounterexampleRow> counterexample_bounds(const Profile& psi, const std::vector<double>& ladder,
                                                     const QuadratureSpec& q) {
  if (psi.center.size() != 1) throw std::invalid_argument("the counterexample family lives in N = 2");
  const double gsup = psi.sup_gradient();
  const double psi0 = psi(Coords{0.0});
  auto at = [&psi](double x) { return psi(Coords{x}); };
  std::vector<CounterexampleRow> rows;
  for (double eps : ladder) {
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("counterexample heights must lie in (0, 1)");
    CounterexampleRow r;
    r.eps = eps;
    // m_eps(x - a) = m_1((x - a)/eps)/eps, so \int m_eps(x - a) psi = \int m_1(s) psi(a + eps s) ds.
    const double plus = against_m1([&](double s) { return at(eps + eps * s); }, q);
    const double minus = against_m1([&](double s) { return at(-eps + eps * s); }, q);
    const double re = std::sqrt(eps);
    r.pairing_plus = plus / re;
    r.pairing = (plus - minus) / re;
    r.pairing_v = plus - minus;
    r.pairing_v_plus = plus;
    r.bound = 2 * re * gsup;
    r.lower = psi0 / (4 * re);
    r.holds = std::abs(r.pairing) <= r.bound * (1 + 10 * q.rel_tol) + q.abs_floor;
    r.holds_plus = r.pairing_plus >= r.lower * (1 - 10 * q.rel_tol);
    rows.push_back(r);
  }
  return rows;
}

PartsIdentity interior_parts_identity(const ScalarField& u, const InteriorMeasure& mu, const Box& box,
                                      const TestFunction& phi, const QuadratureSpec& q) {
  const int n = u.dim;
  if (box.dim() != n || phi.dim != n) throw std::invalid_argument("dimension mismatch in parts identity");
  if (!(box.lo[n - 1] > 0)) throw std::invalid_argument("the box must lie strictly inside the half-space");
  for (int i = 0; i < n; ++i)
    if (!(box.lo[i] < box.hi[i])) throw std::invalid_argument("degenerate box");
  for (const Coords& s : u.singular) {
    bool on_face = false;
    for (int i = 0; i < n; ++i) on_face |= boxed(box.lo, box.hi, s) && (s[i] == box.lo[i] || s[i] == box.hi[i]);
    if (on_face) throw std::invalid_argument("a singular point of u lies on the box boundary");
  }
  PartsIdentity out;
  Piece vol{box,
            [&u, &phi](std::span<const double> y) {
              const HalfSpacePoint x{Coords(y)};
              const double l = phi.laplacian(x);
              return l == 0 ? 0.0 : u(x) * l;
            },
            inside(box, u.singular),
            {}};
  const CubatureResult cv = integrate_checked(std::span<const Piece>(&vol, 1), q, "parts identity volume");
  out.volume = cv.value;
  // Faces: fix coordinate i at lo or hi; outward normal -e_i or +e_i.
  std::vector<Piece> faces;
  for (int i = 0; i < n; ++i)
    for (int side = 0; side < 2; ++side) {
      Coords lo(n - 1), hi(n - 1);
      for (int j = 0, k = 0; j < n; ++j)
        if (j != i) lo[k] = box.lo[j], hi[k] = box.hi[j], ++k;
      const double fixed = side ? box.hi[i] : box.lo[i];
      const double sign = side ? 1.0 : -1.0;
      faces.push_back(Piece{Box(lo, hi),
                            [&u, &phi, i, n, fixed, sign](std::span<const double> s) {
                              Coords c(n);
                              for (int j = 0, k = 0; j < n; ++j) c[j] = j == i ? fixed : s[k++];
                              const HalfSpacePoint x(c);
                              const double g = phi.grad(x)[i];
                              return g == 0 ? 0.0 : sign * u(x) * g;
                            },
                            {},
                            {}});
    }
  double bsum = 0, bl1 = 0;
  for (const Piece& f : faces) {
    const CubatureResult c = integrate_checked(std::span<const Piece>(&f, 1), q, "parts identity face");
    bsum += c.value;
    bl1 += c.l1;
  }
  out.boundary = bsum;
  TestFunction restricted = phi;
  restricted.support = box;
  out.measure = pair_interior(mu, restricted, q);
  const double scale =
      std::max({std::abs(out.boundary), std::abs(out.volume), std::abs(out.measure), cv.l1, bl1, q.abs_floor});
  out.residual = std::abs(out.boundary - out.volume - out.measure) / scale;
  return out;
}

std::string to_csv(const WeakResidualReport& r) {
  std::string s = "test,lhs,rhs_mu,rhs_nu,scale,residual\n";
  for (const auto& row : r.rows)
    s += row.name + "," + fmt(row.lhs) + "," + fmt(row.rhs_mu) + "," + fmt(row.rhs_nu) + "," + fmt(row.scale) + "," +
         fmt(row.residual) + "\n";
  return s;
}

json to_json(const WeakResidualReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"test", row.name},
                    {"lhs", jnum(row.lhs)},
                    {"rhs_mu", jnum(row.rhs_mu)},
                    {"rhs_nu", jnum(row.rhs_nu)},
                    {"scale", jnum(row.scale)},
                    {"residual", jnum(row.residual)}});
  return {{"mode", r.mode == WeakMode::equality ? "equality" : "inequality"},
          {"battery_version", kBatteryVersion},
          {"max_residual", jnum(r.max_residual)},
          {"rows", rows}};
}

std::string to_csv(const TraceReport& r) {
  std::string s = "k,eps,T\n";
  for (std::size_t k = 0; k < r.eps.size(); ++k)
    s += std::to_string(k) + "," + fmt(r.eps[k]) + "," + fmt(r.values[k]) + "\n";
  return s;
}

json to_json(const TraceReport& r) {
  json pts = json::array();
  for (std::size_t k = 0; k < r.eps.size(); ++k) pts.push_back({{"eps", r.eps[k]}, {"T", jnum(r.values[k])}});
  json c = json::array();
  for (int i = 0; i < r.psi.center.size(); ++i) c.push_back(r.psi.center[i]);
  json j = {{"profile",
             {{"kind", r.psi.kind == Profile::Kind::bump ? "bump" : "gauss-bump"},
              {"center", c},
              {"width", r.psi.width}}},
            {"ladder", pts},
            {"limit", jnum(r.limit)},
            {"error", jnum(r.error)},
            {"diverges", r.diverges}};
  if (r.target) j["target"] = jnum(*r.target);
  return j;
}

}  // namespace hsp
