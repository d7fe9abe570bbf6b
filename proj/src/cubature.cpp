#include "hsp/cubature.hpp"
#include "hsp/quadrature.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <numeric>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hsp {

Box::Box(Coords l, Coords h) : lo(l), hi(h) {
  if (lo.size() != hi.size() || lo.size() < 1) throw std::invalid_argument("box corners of mismatched dimension");
  for (int i = 0; i < lo.size(); ++i)
    if (!(hi[i] >= lo[i])) throw std::invalid_argument("box with inverted side");
}

double Box::volume() const {
  double v = 1;
  for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
  return v;
}

bool Box::contains(const Coords& p) const {
  for (int i = 0; i < dim(); ++i)
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  return true;
}

namespace {

// Genz-Malik degree 7 rule with embedded degree 5 rule on [-1, 1]^d,
// weights normalized to sum to one.
struct GenzMalik {
  int d;
  double l2, l3, l4, l5;
  double w1, w2, w3, w4, w5;
  double v1, v2, v3, v4;

  explicit GenzMalik(int dim) : d(dim) {
    l2 = std::sqrt(9.0 / 70.0);
    l3 = l4 = std::sqrt(9.0 / 10.0);
    l5 = std::sqrt(9.0 / 19.0);
    const double dd = d;
    w1 = (12824.0 - 9120.0 * dd + 400.0 * dd * dd) / 19683.0;
    w2 = 980.0 / 6561.0;
    w3 = (1820.0 - 400.0 * dd) / 19683.0;
    w4 = 200.0 / 19683.0;
    w5 = 6859.0 / 19683.0 / std::ldexp(1.0, d);
    v1 = (729.0 - 950.0 * dd + 50.0 * dd * dd) / 729.0;
    v2 = 245.0 / 486.0;
    v3 = (265.0 - 100.0 * dd) / 1458.0;
    v4 = 25.0 / 729.0;
  }
};

struct Kronrod {
  std::array<double, 8> x{}, wk{};
  std::array<double, 4> wg{};

  Kronrod() {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    const auto& ax = GK::abscissa();
    const auto& w = GK::weights();
    const auto& gw = G::weights();
    for (int i = 0; i < 8; ++i) {
      x[i] = ax[i];
      wk[i] = w[i];
    }
    for (int i = 0; i < 4; ++i) wg[i] = gw[i];
  }
};

const Kronrod& kronrod() {
  static const Kronrod k;
  return k;
}

struct Region {
  Box box;
  int task = 0;
  double value = 0, err = 0, l1 = 0;
  int axis = 0;
};

struct Task {
  std::shared_ptr<const Integrand> f;
};

std::size_t evaluate_gk(Region& r, const Integrand& f) {
  const Kronrod& k = kronrod();
  const double c = 0.5 * (r.box.lo[0] + r.box.hi[0]);
  const double h = 0.5 * (r.box.hi[0] - r.box.lo[0]);
  double p[1];
  auto at = [&](double t) {
    p[0] = c + h * t;
    return f(std::span<const double>(p, 1));
  };
  const double f0 = at(0.0);
  double kr = k.wk[0] * f0, gs = k.wg[0] * f0, ab = k.wk[0] * std::abs(f0);
  for (int i = 1; i < 8; ++i) {
    const double fp = at(k.x[i]), fm = at(-k.x[i]);
    kr += k.wk[i] * (fp + fm);
    ab += k.wk[i] * (std::abs(fp) + std::abs(fm));
    if (i % 2 == 0) gs += k.wg[i / 2] * (fp + fm);
  }
  r.value = h * kr;
  r.err = std::abs(h * (kr - gs));
  r.l1 = h * ab;
  r.axis = 0;
  return 15;
}

std::size_t evaluate_gm(Region& r, const Integrand& f) {
  const int d = r.box.dim();
  thread_local std::vector<GenzMalik> rules;
  if (rules.empty())
    for (int i = 0; i <= kMaxCoords; ++i) rules.emplace_back(std::max(i, 2));
  const GenzMalik& g = rules[d];
  Coords c(d), h(d);
  double vol = 1;
  for (int i = 0; i < d; ++i) {
    c[i] = 0.5 * (r.box.lo[i] + r.box.hi[i]);
    h[i] = 0.5 * (r.box.hi[i] - r.box.lo[i]);
    vol *= 2.0 * h[i];
  }
  Coords p = c;
  std::size_t n = 0;
  auto at = [&]() {
    ++n;
    return f(p.span());
  };
  const double f0 = at();
  double s2 = 0, s3 = 0, s4 = 0, s5 = 0;
  double a2 = 0, a3 = 0, a4 = 0, a5 = 0;
  double best = -1;
  int axis = 0;
  for (int i = 0; i < d; ++i) {
    p[i] = c[i] + g.l2 * h[i];
    const double f2p = at();
    p[i] = c[i] - g.l2 * h[i];
    const double f2m = at();
    p[i] = c[i] + g.l3 * h[i];
    const double f3p = at();
    p[i] = c[i] - g.l3 * h[i];
    const double f3m = at();
    p[i] = c[i];
    s2 += f2p + f2m;
    s3 += f3p + f3m;
    a2 += std::abs(f2p) + std::abs(f2m);
    a3 += std::abs(f3p) + std::abs(f3m);
    const double diff = std::abs(f2p + f2m - 2 * f0 - (f3p + f3m - 2 * f0) / 7.0);
    if (diff > best) {
      best = diff;
      axis = i;
    }
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int si = -1; si <= 1; si += 2)
        for (int sj = -1; sj <= 1; sj += 2) {
          p[i] = c[i] + si * g.l4 * h[i];
          p[j] = c[j] + sj * g.l4 * h[j];
          const double v = at();
          s4 += v;
          a4 += std::abs(v);
          p[i] = c[i];
          p[j] = c[j];
        }
  const unsigned corners = 1u << d;
  for (unsigned m = 0; m < corners; ++m) {
    for (int i = 0; i < d; ++i) p[i] = c[i] + ((m >> i) & 1u ? g.l5 : -g.l5) * h[i];
    const double v = at();
    s5 += v;
    a5 += std::abs(v);
  }
  const double i7 = g.w1 * f0 + g.w2 * s2 + g.w3 * s3 + g.w4 * s4 + g.w5 * s5;
  const double i5 = g.v1 * f0 + g.v2 * s2 + g.v3 * s3 + g.v4 * s4;
  r.value = vol * i7;
  r.err = vol * std::abs(i7 - i5);
  r.l1 = vol * (std::abs(g.w1) * std::abs(f0) + g.w2 * a2 + std::abs(g.w3) * a3 + g.w4 * a4 + g.w5 * a5);
  r.axis = axis;
  return n;
}

std::size_t evaluate(Region& r, const Integrand& f) {
  return r.box.dim() == 1 ? evaluate_gk(r, f) : evaluate_gm(r, f);
}

// Evaluate regions[idx] for idx in `which`; parallel if requested and not
// already inside a parallel region. Exceptions are rethrown after the loop.
std::size_t evaluate_batch(std::vector<Region>& regions, const std::vector<std::size_t>& which,
                           const std::vector<Task>& tasks, Execution exec) {
  std::size_t evals = 0;
  std::exception_ptr failure;
  const long n = static_cast<long>(which.size());
  const bool par = exec == Execution::parallel && n > 1;
#pragma omp parallel for schedule(dynamic) reduction(+ : evals) if (par && !omp_in_parallel())
  for (long i = 0; i < n; ++i) {
    try {
      Region& r = regions[which[i]];
      evals += evaluate(r, *tasks[r.task].f);
    } catch (...) {
#pragma omp critical(hsp_cubature_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return evals;
}

void split_boxes(std::vector<Box>& boxes, int axis, double at) {
  std::vector<Box> out;
  for (const Box& b : boxes) {
    if (at > b.lo[axis] && at < b.hi[axis]) {
      Box l = b, h = b;
      l.hi[axis] = at;
      h.lo[axis] = at;
      out.push_back(l);
      out.push_back(h);
    } else {
      out.push_back(b);
    }
  }
  boxes.swap(out);
}

void add_duffy(const Box& box, const Coords& p, const std::shared_ptr<const Integrand>& f,
               const CubatureOptions& opt, std::vector<Piece>& out) {
  const int d = box.dim();
  double scale = 0;
  for (int i = 0; i < d; ++i) scale = std::max(scale, box.hi[i] - box.lo[i]);
  int levels = opt.grading_levels;
  if (levels <= 0) levels = std::max(1, static_cast<int>(std::ceil(-std::log2(opt.inner_radius))));
  for (int k = 0; k < d; ++k) {
    for (int side = 0; side < 2; ++side) {
      const double face = side == 0 ? box.lo[k] : box.hi[k];
      const double dist = std::abs(face - p[k]);
      if (dist <= 1e-14 * scale) continue;
      double area = 1;
      for (int j = 0; j < d; ++j)
        if (j != k) area *= box.hi[j] - box.lo[j];
      if (area == 0) continue;
      const Box base = box;
      auto g = [f, p, base, k, face, dist, area, d](std::span<const double> u) {
        const double t = u[0];
        Coords y(d);
        int idx = 1;
        for (int j = 0; j < d; ++j) {
          const double q = (j == k) ? face : base.lo[j] + u[idx++] * (base.hi[j] - base.lo[j]);
          y[j] = p[j] + t * (q - p[j]);
        }
        return (*f)(y.span()) * std::pow(t, d - 1) * dist * area;
      };
      Piece piece;
      piece.box = Box(Coords(d), [d] {
        Coords one(d);
        for (int i = 0; i < d; ++i) one[i] = 1.0;
        return one;
      }());
      piece.f = g;
      for (int j = 1; j <= levels; ++j) piece.breaks.emplace_back(0, std::ldexp(1.0, -j));
      out.push_back(std::move(piece));
    }
  }
}

void isolate(const Box& box, std::vector<Coords> pts, const std::shared_ptr<const Integrand>& f,
             const CubatureOptions& opt, std::vector<Piece>& out) {
  std::erase_if(pts, [&](const Coords& p) { return !box.contains(p); });
  // drop duplicates
  std::vector<Coords> uniq;
  for (const Coords& p : pts)
    if (std::none_of(uniq.begin(), uniq.end(), [&](const Coords& q) { return q == p; })) uniq.push_back(p);
  if (uniq.empty()) {
    Piece piece;
    piece.box = box;
    piece.f = [f](std::span<const double> y) { return (*f)(y); };
    out.push_back(std::move(piece));
    return;
  }
  if (uniq.size() == 1) {
    add_duffy(box, uniq[0], f, opt, out);
    return;
  }
  // separate the first two points along their widest axis
  int axis = 0;
  double gap = -1;
  for (int i = 0; i < box.dim(); ++i) {
    const double g = std::abs(uniq[0][i] - uniq[1][i]);
    if (g > gap) {
      gap = g;
      axis = i;
    }
  }
  const double cut = 0.5 * (uniq[0][axis] + uniq[1][axis]);
  Box l = box, h = box;
  l.hi[axis] = cut;
  h.lo[axis] = cut;
  isolate(l, uniq, f, opt, out);
  isolate(h, uniq, f, opt, out);
}

}  // namespace

std::vector<Piece> isolate_singularities(const Piece& piece, const CubatureOptions& opt) {
  std::vector<Box> boxes{piece.box};
  for (const auto& [axis, at] : piece.breaks) split_boxes(boxes, axis, at);
  auto f = std::make_shared<const Integrand>(piece.f);
  std::vector<Piece> out;
  for (const Box& b : boxes) isolate(b, piece.singular, f, opt, out);
  return out;
}

CubatureResult integrate(std::span<const Piece> pieces, const CubatureOptions& opt) {
  if (!(opt.rel_tol > 0)) throw std::invalid_argument("rel_tol must be positive");
  std::vector<Task> tasks;
  std::vector<Region> regions;
  for (const Piece& piece : pieces) {
    if (piece.box.volume() == 0) continue;
    for (const Piece& sub : isolate_singularities(piece, opt)) {
      std::vector<Box> boxes{sub.box};
      for (const auto& [axis, at] : sub.breaks) split_boxes(boxes, axis, at);
      const int id = static_cast<int>(tasks.size());
      tasks.push_back({std::make_shared<const Integrand>(sub.f)});
      for (const Box& b : boxes) {
        if (b.volume() == 0) continue;
        Region r;
        r.box = b;
        r.task = id;
        regions.push_back(r);
      }
    }
  }
  CubatureResult res;
  if (regions.empty()) {
    res.converged = true;
    return res;
  }
  std::vector<std::size_t> fresh(regions.size());
  std::iota(fresh.begin(), fresh.end(), std::size_t{0});
  res.evaluations += evaluate_batch(regions, fresh, tasks, opt.exec);

  std::vector<std::size_t> order;
  for (;;) {
    double v = 0, e = 0, l = 0;
    for (const Region& r : regions) {
      v += r.value;
      e += r.err;
      l += r.l1;
    }
    res.value = v;
    res.error = e;
    res.l1 = l;
    res.regions = regions.size();
    if (!std::isfinite(v) || !std::isfinite(e)) {
      res.converged = false;
      return res;
    }
    const double tol = std::max(opt.abs_floor, opt.rel_tol * std::max(std::abs(v), opt.l1_fraction * l));
    if (e <= tol) {
      res.converged = true;
      return res;
    }
    if (regions.size() >= opt.max_regions) return res;

    order.resize(regions.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (regions[a].err != regions[b].err) return regions[a].err > regions[b].err;
      return a < b;
    });
    const std::size_t capacity = opt.max_regions - regions.size();
    double removed = 0;
    fresh.clear();
    for (std::size_t idx : order) {
      if (fresh.size() / 2 >= capacity) break;
      if (e - removed <= 0.5 * tol && !fresh.empty()) break;
      Region& r = regions[idx];
      removed += r.err;
      Region hi = r;
      const int ax = r.axis;
      const double mid = 0.5 * (r.box.lo[ax] + r.box.hi[ax]);
      r.box.hi[ax] = mid;
      hi.box.lo[ax] = mid;
      fresh.push_back(idx);
      fresh.push_back(regions.size());
      regions.push_back(hi);
    }
    res.evaluations += evaluate_batch(regions, fresh, tasks, opt.exec);
  }
}

CubatureResult integrate(const Piece& piece, const CubatureOptions& opt) {
  return integrate(std::span<const Piece>(&piece, 1), opt);
}

CubatureResult integrate_checked(std::span<const Piece> pieces, const QuadratureSpec& q, const char* what) {
  CubatureResult r = integrate(pieces, q.cubature());
  if (!r.converged)
    throw QuadratureFailure(std::string(what) + ": cubature did not converge (value " + std::to_string(r.value) +
                            ", error " + std::to_string(r.error) + ", regions " + std::to_string(r.regions) + ")");
  return r;
}

TailedResult integrate_with_tail(const std::function<std::vector<Piece>(double)>& pieces,
                                 const std::function<double(double)>& tail, double L0, const QuadratureSpec& q,
                                 const char* what) {
  const QuadratureSpec half = q.with_tol(0.5 * q.rel_tol);
  TailedResult out;
  double L = L0;
  auto first = pieces(L);
  out.cubature = integrate_checked(first, half, what);
  const double est = std::abs(out.cubature.value);
  auto small = [&](double t) { return t <= std::max(0.5 * q.rel_tol * est, q.abs_floor); };
  double t = tail(L);
  if (small(t)) {
    out.value = out.cubature.value;
    out.tail = t;
    out.radius = L;
    return out;
  }
  for (int i = 0; i < 80 && !small(t); ++i) {
    L *= 2.0;
    t = tail(L);
  }
  if (!std::isfinite(t) || !small(t)) {
    out.value = std::numeric_limits<double>::infinity();
    out.tail = std::numeric_limits<double>::infinity();
    out.radius = L;
    return out;
  }
  auto second = pieces(L);
  out.cubature = integrate_checked(second, half, what);
  out.value = out.cubature.value;
  out.tail = t;
  out.radius = L;
  return out;
}

}  // namespace hsp
