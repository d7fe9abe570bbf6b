#include "hsp/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "hsp/domains.hpp"
#include "hsp/huber.hpp"
#include "hsp/measures.hpp"
#include "hsp/potentials.hpp"
#include "hsp/report.hpp"
#include "hsp/rings.hpp"
#include "hsp/sampling.hpp"
#include "hsp/weakform.hpp"

namespace hsp {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ScalarField field(int n, std::string name, std::function<double(const HalfSpacePoint&)> f) {
  ScalarField u;
  u.dim = n;
  u.name = std::move(name);
  u.provenance = Provenance::corpus;
  u.eval = std::move(f);
  return u;
}

Expectation ring(const char* suite, const char* expected, const char* claim, int levels, double h = 0,
                 std::vector<int> dims = {}) {
  Expectation e;
  e.suite = suite;
  e.expected = expected;
  e.claim = claim;
  e.levels = levels;
  e.h = h;
  e.dims = std::move(dims);
  return e;
}

Expectation simple(const char* suite, const char* expected, const char* claim) {
  Expectation e;
  e.suite = suite;
  e.expected = expected;
  e.claim = claim;
  return e;
}

Expectation trace(const char* expected, const char* claim, std::optional<double> target) {
  Expectation e = simple("trace", expected, claim);
  e.target = target;
  return e;
}

// The N = 2 sign-changing family, with eps = x_2:
//   v(x1, eps) = m_eps(x1 - eps) - m_eps(x1 + eps),  u = v / sqrt(eps).
ScalarField family(bool scaled, bool positive_only, const char* name) {
  ScalarField u = field(2, name, [scaled, positive_only](const HalfSpacePoint& x) {
    const double e = x.height();
    if (!(e > 0)) return 0.0;
    double v = mollifier((x[0] - e) / e) / e;
    if (!positive_only) v -= mollifier((x[0] + e) / e) / e;
    return scaled ? v / std::sqrt(e) : v;
  });
  u.boundary_features = {Coords{0.0}};
  return u;
}

RepresentationTriple poisson_gauss_triple(int n) {
  RepresentationTriple t = RepresentationTriple::zero(n);
  t.nu = density_measure<Side::boundary>(n, named_density("gauss", n - 1, Side::boundary));
  return t;
}

RepresentationTriple green_delta_triple(int n) {
  RepresentationTriple t = RepresentationTriple::zero(n);
  Coords a(n);
  a[n - 1] = 2;
  t.mu = dirac(HalfSpacePoint(a));
  return t;
}

Profile unit_bump(int n) {
  Profile p;
  p.center = Coords(n - 1);
  p.width = 1;
  return p;
}

std::vector<CorpusEntry> build() {
  std::vector<CorpusEntry> r;
  const char* lp = "functions in L^p satisfy the half-space ring condition";
  {
    CorpusEntry e;
    e.name = "linear";
    e.formula = "x_N";
    e.make = [](int n) {
      ScalarField u = linear_field(n, 1.0);
      u.provenance = Provenance::corpus;
      return u;
    };
    e.nonnegative_superharmonic = true;
    e.expected = {ring("r-plus", "satisfied", "h x_N is its own harmonic part", 8, 1.0),
                  ring("r-plus-0", "not-satisfied", "x_N is not a Green potential", 8),
                  [] {
                    Expectation x = simple("lift", "exact", "the lift of h x_N is the constant h");
                    x.h = 1;
                    return x;
                  }()};
    r.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "constant";
    e.formula = "1";
    e.make = [](int n) {
      ScalarField u = constant_field(n, 1.0);
      u.provenance = Provenance::corpus;
      return u;
    };
    e.nonnegative_superharmonic = true;
    e.expected = {ring("r-plus-0", "satisfied", "bounded functions satisfy the weighted ring condition", 18),
                  ring("r", "not-satisfied", "constants violate the unweighted whole-space ring condition", 8)};
    r.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "gaussian";
    e.formula = "exp(-|x|^2)";
    e.make = [](int n) {
      return field(n, "gaussian", [](const HalfSpacePoint& x) { return std::exp(-x.coords().norm2()); });
    };
    e.expected = {ring("r-plus-0", "satisfied", lp, 8)};
    r.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "weighted-l2";
    e.formula = "(1+|x|)^(-(N+3)/2)";
    e.make = [](int n) {
      const double p = -(n + 3) / 2.0;
      return field(n, "weighted-l2", [p](const HalfSpacePoint& x) { return std::pow(1 + x.norm(), p); });
    };
    e.expected = {ring("r-plus-0", "satisfied", "x_N |u|^p integrable implies the ring condition", 10)};
    r.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "inverse-height";
    e.formula = "1/(1+x_N)";
    e.make = [](int n) {
      return field(n, "inverse-height", [](const HalfSpacePoint& x) { return 1 / (1 + x.height()); });
    };
    e.expected = {ring("r-plus-0", "satisfied", "x_N |u| bounded implies the ring condition", 12)};
    r.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "sqrt-growth";
    e.formula = "|x|^(1/2)";
    e.make = [](int n) {
      return field(n, "sqrt-growth", [](const HalfSpacePoint& x) { return std::sqrt(x.norm()); });
    };
    e.expected = {ring("r-plus-0", "satisfied", "growth slower than |x| implies the ring condition", 36)};
    r.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "morrey";
    e.formula = "(1+|x|)^(-N/2)";
    e.make = [](int n) {
      const double p = -n / 2.0;
      return field(n, "morrey", [p](const HalfSpacePoint& x) { return std::pow(1 + x.norm(), p); });
    };
    e.expected = {ring("r-plus-0", "satisfied", "Morrey-type decay implies the ring condition", 12)};
    r.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "unotl1c";
    e.formula = "|x|^(-N) (1 - N x_N^2/|x|^2)";
    e.make = [](int n) {
      ScalarField u = field(n, "unotl1c", [n](const HalfSpacePoint& x) {
        const double r2 = x.coords().norm2();
        return std::pow(r2, -0.5 * n) * (1 - n * x.height() * x.height() / r2);
      });
      u.boundary_features = {Coords(n - 1)};
      return u;
    };
    e.expected = {simple("fd-harmonic", "harmonic", "the field is harmonic in the open half-space"),
                  ring("r-plus-0", "satisfied", "the field satisfies the ring condition without h", 8),
                  simple("boundary-l1", "diverges", "the field is not integrable up to the boundary")};
    r.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "neg-inv-square";
    e.formula = "-|x|^(-2)";
    e.dims = {2};
    e.make = [](int n) {
      ScalarField u = field(n, "neg-inv-square", [](const HalfSpacePoint& x) { return -1 / x.coords().norm2(); });
      u.boundary_features = {Coords(n - 1)};
      return u;
    };
    e.neg_laplacian = [](const HalfSpacePoint& x) {
      const double r2 = x.coords().norm2();
      return 4 / (r2 * r2);
    };
    e.expected = {simple("fd-superharmonic", "superharmonic", "-Laplacian u = 4|x|^-4 >= 0")};
    r.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "counterexample-u";
    e.formula = "eps^(-1/2) (m_eps(x1-eps) - m_eps(x1+eps)), eps = x2";
    e.dims = {2};
    e.make = [](int) { return family(true, false, "counterexample-u"); };
    e.expected = {trace("converges", "pairings vanish like sqrt(eps)", 0.0)};
    r.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "counterexample-u-plus";
    e.formula = "eps^(-1/2) m_eps(x1-eps), eps = x2";
    e.dims = {2};
    e.make = [](int) { return family(true, true, "counterexample-u-plus"); };
    e.expected = {trace("diverges", "the positive part has no lim-trace", std::nullopt)};
    r.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "counterexample-v";
    e.formula = "m_eps(x1-eps) - m_eps(x1+eps), eps = x2";
    e.dims = {2};
    e.make = [](int) { return family(false, false, "counterexample-v"); };
    e.expected = {trace("converges", "the unscaled difference has trace 0", 0.0)};
    r.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "counterexample-v-plus";
    e.formula = "m_eps(x1-eps), eps = x2";
    e.dims = {2};
    e.make = [](int) { return family(false, true, "counterexample-v-plus"); };
    e.expected = {trace("converges", "the positive part tends to the Dirac mass at 0", 1.0)};
    r.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "poisson-gauss";
    e.formula = "P[gauss]";
    e.make = [](int n) {
      ScalarField u = represent(poisson_gauss_triple(n));
      u.name = "poisson-gauss";
      return u;
    };
    e.nonnegative_superharmonic = true;
    // the trace target \int psi d(gauss) depends on N and is computed at run time
    e.expected = {ring("r-plus-0", "satisfied", "Poisson integrals satisfy the ring condition with h = 0", 10),
                  trace("converges", "the lim-trace of P[nu] is nu", std::nullopt)};
    r.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "green-delta";
    e.formula = "G[delta_(0,..,0,2)]";
    e.make = [](int n) {
      ScalarField u = represent(green_delta_triple(n));
      u.name = "green-delta";
      return u;
    };
    e.nonnegative_superharmonic = true;
    e.expected = {ring("r-plus-0", "satisfied", "Green potentials satisfy the ring condition with h = 0", 10),
                  trace("converges", "Green potentials have zero lim-trace", 0.0)};
    r.push_back(e);
  }
  return r;
}

double trace_target(const CorpusEntry& e, const Expectation& x, int n, const QuadratureSpec& q) {
  if (x.target) return *x.target;
  if (e.name == "poisson-gauss") {
    const Profile psi = unit_bump(n);
    return pair_boundary(poisson_gauss_triple(n).nu, [psi](const Coords& y) { return psi(y); }, psi.support(), q);
  }
  return kNaN;
}

std::vector<HalfSpacePoint> fd_points(int n, std::uint64_t seed) {
  const auto shift = random_shift(n, seed);
  std::vector<HalfSpacePoint> pts;
  for (int i = 0; i < 8; ++i) {
    const Coords h = halton(i, n, shift);
    Coords c(n);
    for (int k = 0; k + 1 < n; ++k) c[k] = 2.8 * h[k] - 1.4;
    c[n - 1] = 0.25 + 2.75 * h[n - 1];
    pts.emplace_back(c);
  }
  return pts;
}

SuiteOutcome run_one(const CorpusEntry& e, const Expectation& x, const ScalarField& u, int n,
                     const QuadratureSpec& q) {
  SuiteOutcome o;
  o.entry = e.name;
  o.suite = x.suite;
  o.expected = x.expected;
  o.claim = x.claim;
  o.dim = n;
  o.slope = kNaN;
  if (x.suite == "r-plus-0" || x.suite == "r-plus" || x.suite == "r") {
    const RingCondition c = parse_condition(x.suite);
    Coords en(n);
    en[n - 1] = 1;
    ScanOptions opt;
    opt.levels = x.levels;
    const RingScanReport rep = scan(u, x.h, HalfSpacePoint(en), c, opt, q);
    o.observed = to_string(rep.verdict);
    o.value = rep.min_value;
    o.slope = rep.fitted_slope;
  } else if (x.suite == "fd-harmonic") {
    const double big = fd_harmonic_residual(u, 4e-2), small = fd_harmonic_residual(u, 2e-2);
    o.value = big > 0 ? small / big : 0.0;
    o.observed = (small <= 0.3 * big || big <= 1e-10) ? "harmonic" : "not-harmonic";
  } else if (x.suite == "fd-superharmonic") {
    double worst = 0;
    bool ok = true;
    for (const HalfSpacePoint& p : fd_points(n, q.seed)) {
      const double d = -discrete_laplacian(u, p, 1e-3);
      if (e.neg_laplacian) {
        const double exact = e.neg_laplacian(p);
        worst = std::max(worst, std::abs(d - exact) / std::abs(exact));
        ok = ok && exact >= 0;
      }
      ok = ok && d >= -1e-6 * std::abs(u(p));
    }
    ok = ok && worst <= 1e-3;
    o.value = worst;
    o.observed = ok ? "superharmonic" : "not-superharmonic";
  } else if (x.suite == "boundary-l1") {
    const double j1 = boundary_local_l1(u, 1e-1, q), j2 = boundary_local_l1(u, 1e-2, q),
                 j3 = boundary_local_l1(u, 1e-3, q);
    o.value = j3 / j1;
    o.observed = (j2 - j1 > 0 && j3 - j2 >= 0.5 * (j2 - j1)) ? "diverges" : "bounded";
  } else if (x.suite == "trace") {
    const TraceReport t = lim_trace(u, unit_bump(n), default_ladder(), q);
    const double target = trace_target(e, x, n, q);
    o.value = t.limit;
    if (t.diverges)
      o.observed = "diverges";
    else if (std::isnan(target) || std::abs(t.limit - target) <= 1e-2 * std::max(1.0, std::abs(target)))
      o.observed = "converges";
    else
      o.observed = "wrong-limit";
  } else if (x.suite == "lift") {
    const LiftedField v = lift(u);
    const auto shift = random_shift(n + 2, q.seed);
    double worst = 0;
    for (int i = 0; i < 16; ++i) {
      Coords xi = halton(i, n + 2, shift);
      for (int k = 0; k < n + 2; ++k) xi[k] = 4 * xi[k] - 2;
      worst = std::max(worst, std::abs(v(xi) - x.h));
    }
    o.value = worst;
    o.observed = worst <= 1e-12 * std::max(1.0, std::abs(x.h)) ? "exact" : "inexact";
  } else {
    throw std::invalid_argument("unknown corpus suite '" + x.suite + "'");
  }
  o.passed = o.observed == o.expected;
  return o;
}

}  // namespace

bool CorpusEntry::supports(int n) const {
  if (n < 2 || n > kMaxDim) return false;
  return dims.empty() || std::find(dims.begin(), dims.end(), n) != dims.end();
}

const std::vector<CorpusEntry>& registry() {
  static const std::vector<CorpusEntry> r = build();
  return r;
}

const CorpusEntry& find_entry(const std::string& name) {
  for (const CorpusEntry& e : registry())
    if (e.name == name) return e;
  throw std::invalid_argument("unknown corpus entry '" + name + "'");
}

json registry_json() {
  json out = json::array();
  for (const CorpusEntry& e : registry()) {
    json ex = json::array();
    for (const Expectation& x : e.expected) {
      json j = {{"suite", x.suite}, {"expected", x.expected}, {"claim", x.claim}};
      if (x.suite == "r" || x.suite == "r-plus" || x.suite == "r-plus-0") j["levels"] = x.levels;
      if (x.suite == "r-plus" || x.suite == "lift") j["h"] = x.h;
      if (x.target) j["target"] = *x.target;
      if (!x.dims.empty()) j["dims"] = x.dims;
      ex.push_back(j);
    }
    json entry = {{"name", e.name}, {"formula", e.formula}, {"expected", ex},
                  {"nonnegative_superharmonic", e.nonnegative_superharmonic}};
    if (!e.dims.empty()) entry["dims"] = e.dims;
    out.push_back(entry);
  }
  return out;
}

double fd_harmonic_residual(const ScalarField& u, double step, std::uint64_t seed) {
  double worst = 0;
  for (const HalfSpacePoint& p : fd_points(u.dim, seed)) worst = std::max(worst, std::abs(discrete_laplacian(u, p, step)));
  return worst;
}

double boundary_local_l1(const ScalarField& u, double delta, const QuadratureSpec& q) {
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must lie in (0, 1)");
  const int n = u.dim;
  // Polar angle theta from e_N, directions of S^{N-2} for x', radius
  // t = delta (t_max/delta)^s out to the cylinder wall t_max(theta).
  const auto sphere = std::make_shared<const SphereParam>(n - 1);
  const int na = sphere->angles();
  const int d = na + 2;
  std::vector<Piece> pieces;
  for (int branch = 0; branch < sphere->branches(); ++branch) {
    Coords lo(d), hi(d);
    hi[0] = 1;
    hi[1] = std::numbers::pi / 2;
    for (int k = 0; k < na; ++k) lo[2 + k] = sphere->lo(k), hi[2 + k] = sphere->hi(k);
    Piece p;
    p.box = Box(lo, hi);
    p.f = [&u, sphere, n, na, branch, delta](std::span<const double> a) {
      double dir[kMaxCoords];
      const double jac = sphere->map(a.subspan(2, na), branch, dir);
      const double th = a[1], st = std::sin(th), ct = std::cos(th);
      const double tmax = std::min(st > 0 ? 1 / st : kInfinity, ct > 0 ? 1 / ct : kInfinity);
      const double span = std::log(tmax / delta);
      const double t = delta * std::exp(a[0] * span);
      Coords y(n);
      for (int i = 0; i + 1 < n; ++i) y[i] = t * st * dir[i];
      y[n - 1] = t * ct;
      if (!(y[n - 1] > 0)) return 0.0;
      const double w = jac * std::pow(st, n - 2) * std::pow(t, n) * span;
      return w == 0 ? 0.0 : std::abs(u(HalfSpacePoint(y))) * w;
    };
    p.breaks.emplace_back(1, std::numbers::pi / 4);
    pieces.push_back(std::move(p));
  }
  return integrate_checked(pieces, q, "boundary-local L1").value;
}

std::vector<SuiteOutcome> run_entry(const CorpusEntry& entry, int n, const QuadratureSpec& q) {
  std::vector<SuiteOutcome> out;
  if (!entry.supports(n)) return out;
  const ScalarField u = entry.make(n);
  for (const Expectation& x : entry.expected) {
    if (!x.dims.empty() && std::find(x.dims.begin(), x.dims.end(), n) == x.dims.end()) continue;
    out.push_back(run_one(entry, x, u, n, q));
  }
  return out;
}

std::vector<SuiteOutcome> run_corpus(int n, const QuadratureSpec& q, const std::vector<std::string>& only) {
  for (const std::string& name : only) find_entry(name);
  std::vector<SuiteOutcome> out;
  for (const CorpusEntry& e : registry()) {
    if (!only.empty() && std::find(only.begin(), only.end(), e.name) == only.end()) continue;
    auto rows = run_entry(e, n, q);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

std::string to_csv(const std::vector<SuiteOutcome>& rows) {
  std::string s = "entry,dim,suite,expected,observed,passed,value,slope\n";
  for (const SuiteOutcome& o : rows)
    s += o.entry + "," + std::to_string(o.dim) + "," + o.suite + "," + o.expected + "," + o.observed + "," +
         (o.passed ? "1" : "0") + "," + fmt(o.value) + "," + fmt(o.slope) + "\n";
  return s;
}

json to_json(const std::vector<SuiteOutcome>& rows) {
  json a = json::array();
  for (const SuiteOutcome& o : rows)
    a.push_back({{"entry", o.entry},
                 {"dim", o.dim},
                 {"suite", o.suite},
                 {"expected", o.expected},
                 {"observed", o.observed},
                 {"passed", o.passed},
                 {"claim", o.claim},
                 {"value", jnum(o.value)},
                 {"slope", jnum(o.slope)}});
  return a;
}

}  // namespace hsp
