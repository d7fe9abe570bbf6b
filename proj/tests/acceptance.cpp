// Acceptance battery. `acceptance k` runs criterion k (1..11), `acceptance`
// runs them all. Every check prints one detail line; each criterion ends
// with a single "criterion k: PASS|FAIL" line and sets the exit status.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hsp/corpus.hpp"
#include "hsp/estimates.hpp"
#include "hsp/huber.hpp"
#include "hsp/kernels.hpp"
#include "hsp/potentials.hpp"
#include "hsp/rings.hpp"
#include "hsp/sampling.hpp"
#include "hsp/weakform.hpp"

using namespace hsp;
using nlohmann::json;

namespace {

struct Criterion {
  int id;
  bool ok = true;

  void check(bool pass, const std::string& what) {
    std::printf("  [%s] %s\n", pass ? "ok" : "FAIL", what.c_str());
    std::fflush(stdout);
    ok = ok && pass;
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

HalfSpacePoint unit_height(int n, double h = 1) {
  Coords c(n);
  c[n - 1] = h;
  return HalfSpacePoint(c);
}

BoundaryMeasure boundary_density(int n, const json& d) {
  return std::get<BoundaryMeasure>(load_measure(json{{"dim", n}, {"side", "boundary"}, {"density", d}}));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ----------------------------------------------------------------- 1
void kernel_audit(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int n = 2; n <= 5; ++n) {
    const AuditReport a = estimates_audit(n, 1000, 2026);
    c.check(a.symmetry_violations == 0, "N=" + std::to_string(n) + " symmetry, worst rel " + num(a.max_symmetry_rel));
    c.check(a.monotone_violations == 0, "N=" + std::to_string(n) + " monotone in eps");
    c.check(a.gradient_violations == 0,
            "N=" + std::to_string(n) + " gradient vs FD, worst rel " + num(a.max_gradient_fd_rel));
    for (const BoundCheck& b : a.bounds)
      c.check(b.violations == 0, "N=" + std::to_string(n) + " " + b.name + ": " + std::to_string(b.violations) +
                                     " violations, worst ratio " + num(b.worst_ratio));
  }
  const double dt = seconds_since(t0);
  c.check(dt <= 10, "runtime " + num(dt) + " s");
}

// ----------------------------------------------------------------- 2
void poisson_normalization(Criterion& c) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> tang(-3, 3), logh(-2, 1);
  for (int n : {2, 3}) {
    const BoundaryMeasure leb = boundary_density(n, {{"name", "constant"}});
    double worst = 0;
    for (int i = 0; i < 10; ++i) {
      Coords x(n);
      for (int k = 0; k + 1 < n; ++k) x[k] = tang(rng);
      x[n - 1] = std::pow(10.0, logh(rng));
      worst = std::max(worst, std::abs(poisson_integral(leb, HalfSpacePoint(x)) - 1));
    }
    c.check(worst <= 1e-6, "N=" + std::to_string(n) + " max |P[1] - 1| = " + num(worst));
  }
}

// ----------------------------------------------------------------- 3
void asymptotics(Criterion& c) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int n = 2; n <= 5; ++n) {
    const double cp = Constants::of(n).c_prime;
    double worst_g = 0, worst_k = 0;
    for (int i = 0; i < 8; ++i) {
      Coords dir(n), x(n);
      double s = 0;
      for (int k = 0; k < n; ++k) s += (dir[k] = g(rng)) * dir[k];
      s = std::sqrt(s);
      for (int k = 0; k < n; ++k) dir[k] /= s;
      dir[n - 1] = std::abs(dir[n - 1]) + 0.05;  // keep y away from the boundary
      for (int k = 0; k + 1 < n; ++k) x[k] = 0.5 * g(rng);
      x[n - 1] = 0.2 + std::abs(g(rng));
      Coords y(n);
      double ny = 0;
      for (int k = 0; k < n; ++k) ny += dir[k] * dir[k];
      for (int k = 0; k < n; ++k) y[k] = 1e4 * dir[k] / std::sqrt(ny);
      const HalfSpacePoint X(x), Y(y);
      const double lim = cp * X.height();
      worst_g = std::max(worst_g, std::abs(green(X, Y) * std::pow(1e4, n) / Y.height() / lim - 1));
      Coords yp(n - 1);
      double nyp = 0;
      for (int k = 0; k + 1 < n; ++k) nyp += dir[k] * dir[k];
      for (int k = 0; k + 1 < n; ++k) yp[k] = 1e4 * dir[k] / std::sqrt(nyp);
      worst_k = std::max(worst_k, std::abs(poisson(X, yp) * std::pow(1e4, n) / lim - 1));
    }
    c.check(worst_g < 1e-2, "N=" + std::to_string(n) + " G |y|^N / y_N -> C' x_N, worst rel " + num(worst_g));
    c.check(worst_k < 1e-2, "N=" + std::to_string(n) + " K |y'|^N -> C' x_N, worst rel " + num(worst_k));
  }
}

// ----------------------------------------------------------------- 4
std::vector<Profile> boundary_bumps(int n) {
  const double centers[5][2] = {{0, 0}, {0.3, -0.2}, {-0.5, 0.4}, {1.0, 0.5}, {-1.2, -0.8}};
  const double widths[5] = {1, 0.8, 0.6, 1.2, 0.5};
  std::vector<Profile> out;
  for (int i = 0; i < 5; ++i) {
    Profile p;
    p.center = Coords(n - 1);
    for (int k = 0; k + 1 < n; ++k) p.center[k] = centers[i][k];
    p.width = widths[i];
    out.push_back(p);
  }
  return out;
}

void round_trip(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int n : {2, 3}) {
    const std::string tag = "N=" + std::to_string(n) + " ";
    RepresentationTriple t = RepresentationTriple::zero(n, 0.3);
    t.nu = boundary_density(n, {{"name", "gauss"}});
    t.mu = dirac(unit_height(n));
    // inner (field evaluation) and outer (pairing) tolerances
    QuadratureSpec inner, outer;
    inner.rel_tol = n == 2 ? 1e-8 : 1e-4;
    outer.rel_tol = n == 2 ? 1e-5 : 1e-4;
    const ScalarField u = represent(t, inner);

    const WeakResidualReport w = weak_residual(u, t.mu, t.nu, standard_battery(n), outer);
    c.check(w.max_residual <= 1e-3, tag + "weak residual " + num(w.max_residual) + " [" + num(seconds_since(t0)) + " s]");

    const SlopeEstimate h = estimate_h(u, 8, inner);
    c.check(std::abs(h.h - 0.3) <= 1e-2, tag + "estimate_h " + num(h.h) + " [" + num(seconds_since(t0)) + " s]");

    const RingScanReport r = scan(u, 0.3, unit_height(n), RingCondition::ring_plus, {}, inner);
    c.check(r.verdict == Verdict::satisfied, tag + "(R+) h=0.3 verdict " + to_string(r.verdict));
    c.check(r.fitted_slope >= -n - 0.7 && r.fitted_slope <= -n + 0.7,
            tag + "(R+) slope " + num(r.fitted_slope) + " [" + num(seconds_since(t0)) + " s]");

    const LowerBound lb = lower_bound_check(u, t, nested_cloud(n, 6, 32, 1));
    c.check(lb.holds && lb.c0 > 0, tag + "lower bound c0 " + num(lb.c0) + " [" + num(seconds_since(t0)) + " s]");

    const std::vector<double> ladder = {1e-1, 1e-2, 1e-3, 1e-4};
    for (const Profile& p : boundary_bumps(n)) {
      const TraceReport tr = lim_trace(u, p, ladder, outer);
      const double target = pair_boundary(t.nu, [&p](const Coords& y) { return p(y); }, p.support(), outer);
      c.check(!tr.diverges && std::abs(tr.limit - target) <= 1e-3,
              tag + "trace " + num(tr.limit) + " vs " + num(target) + " (w=" + num(p.width) + ") [" +
                  num(seconds_since(t0)) + " s]");
    }
  }
  const double dt = seconds_since(t0);
  c.check(dt <= 180, "runtime " + num(dt) + " s");
}

// ----------------------------------------------------------------- 5
void trivial_exactness(Criterion& c) {
  const double h = 0.7;
  for (int n : {2, 3}) {
    const std::string tag = "N=" + std::to_string(n) + " ";
    const ScalarField u = linear_field(n, h);
    const HalfSpacePoint x = unit_height(n);
    double worst = 0;
    for (double R = 4; R <= 512; R *= 2)
      worst = std::max({worst, std::abs(ring_plus_integral(u, h, x, R)), std::abs(ball_limit_integral(u, h, x, R))});
    c.check(worst == 0, tag + "ring integrals max " + num(worst));

    const WeakResidualReport w = weak_residual(u, InteriorMeasure::zero(n), BoundaryMeasure::zero(n), standard_battery(n));
    c.check(w.max_residual <= 1e-8, tag + "weak residual " + num(w.max_residual));

    Profile p;
    p.center = Coords(n - 1);
    const TraceReport tr = lim_trace(u, p);
    c.check(!tr.diverges && std::abs(tr.limit) <= 1e-10, tag + "trace " + num(tr.limit));

    const LiftedField v = lift(u);
    double lift_err = 0;
    const auto shift = random_shift(n + 2, 9);
    for (int i = 0; i < 64; ++i) {
      Coords xi = halton(i, n + 2, shift);
      for (int k = 0; k < n + 2; ++k) xi[k] = 4 * xi[k] - 2;
      if (i % 8 == 0) xi[n - 1] = xi[n] = xi[n + 1] = 0;  // on the lifted axis
      lift_err = std::max(lift_err, std::abs(v(xi) - h));
    }
    c.check(lift_err <= 1e-12 * h, tag + "lift == h, max deviation " + num(lift_err));
  }
}

// ----------------------------------------------------------------- 6
void green_ring(Criterion& c) {
  for (int n : {2, 3}) {
    const std::string tag = "N=" + std::to_string(n) + " ";
    const HalfSpacePoint x = unit_height(n);
    for (double R : {8.0, 16.0, 32.0}) {
      const double v = green_ring_integral(constant_field(n, 1), x, R);
      c.check(std::abs(v - 1) <= 0.02, tag + "u=1 R=" + num(R) + ": " + num(v));
    }
  }
  const ScalarField lin = expression_field("2 + 3*x2", 2);
  for (double R : {8.0, 32.0}) {
    const double v = green_ring_integral(lin, HalfSpacePoint{0, 1}, R);
    c.check(std::abs(v / 5 - 1) <= 0.05, "u=2+3x_N R=" + num(R) + ": " + num(v) + " (expect 5)");
  }
  RepresentationTriple t = RepresentationTriple::zero(2);
  t.mu = dirac(HalfSpacePoint{0, 1});
  const ScalarField g = represent(t);
  const double g8 = green_ring_integral(g, HalfSpacePoint{0, 1}, 8);
  const double g64 = green_ring_integral(g, HalfSpacePoint{0, 1}, 64);
  c.check(g64 < 0.05 * g8, "Green potential of delta: R=64 / R=8 = " + num(g64 / g8) + " (need < 0.05)");
}

// ----------------------------------------------------------------- 7
void huber_suite(Criterion& c) {
  const int n = 2;
  std::size_t lift_bad = 0, mean_bad = 0, mean_runs = 0, cmp_bad = 0, cmp_runs = 0;
  for (const CorpusEntry& e : registry()) {
    if (!e.supports(n)) continue;
    const ScalarField u = e.make(n);
    const LiftedField v = lift(u);
    const ScalarField w = unlift(v);
    const auto shift = random_shift(n, 4);
    for (int i = 0; i < 32; ++i) {
      Coords p = halton(i, n, shift);
      p[0] = 4 * p[0] - 2;
      p[1] = 0.05 + 3 * p[1];
      const HalfSpacePoint x(p);
      const double a = u(x), b = w(x);
      if (!(a == b || std::abs(a - b) <= 1e-14 * std::abs(a))) ++lift_bad;
    }
    if (e.nonnegative_superharmonic) {
      const auto s3 = random_shift(n + 2, 21);
      for (int i = 0; i < 20; ++i) {
        const Coords h = halton(i, n + 2, s3);
        const LiftedPoint center = lifted_point(std::vector<double>{4 * h[0] - 2}, 0.2 + 2 * h[1], 2 * h[2] - 1, 2 * h[3] - 1);
        const double r = std::min(1.5, 0.9 * lifted_singular_distance(u, center)) * (0.2 + 0.8 * radical_inverse(i + 1, 13));
        const SphericalMean m = spherical_mean(v, center, r);
        ++mean_runs;
        if (m.mean > v(center) + m.tol) ++mean_bad;
      }
    }
    for (const HalfSpacePoint& x : {HalfSpacePoint{0, 1}, HalfSpacePoint{0.5, 0.5}}) {
      for (double R : {4.0, 8.0}) {
        if (annulus_comparison_applies(x, R, 0.5)) {
          ++cmp_runs;
          cmp_bad += !annulus_comparison(u, 0, x, R, 0.5).holds;
        }
        if (annulus_split_applies(x, R, 0.8)) {
          ++cmp_runs;
          cmp_bad += !annulus_split_bound(u, x, R, 0.8).holds;
        }
      }
    }
  }
  c.check(lift_bad == 0, "unlift(lift(u)) == u on the corpus: " + std::to_string(lift_bad) + " mismatches");
  c.check(mean_runs > 0 && mean_bad == 0, "spherical means <= centre value: " + std::to_string(mean_bad) + "/" +
                                              std::to_string(mean_runs) + " violations");
  c.check(cmp_runs > 0 && cmp_bad == 0,
          "annulus inequalities: " + std::to_string(cmp_bad) + "/" + std::to_string(cmp_runs) + " violations");
}

// ----------------------------------------------------------------- 8
void counterexample(Criterion& c) {
  Profile p;
  p.center = Coords{0.0};
  p.width = 1;
  const auto rows = counterexample_bounds(p, default_ladder());
  std::size_t bad = 0, bad_plus = 0;
  for (const CounterexampleRow& r : rows) {
    bad += !r.holds;
    if (r.eps <= 1e-2) bad_plus += !r.holds_plus;
  }
  c.check(bad == 0, "|T_eps(psi)| <= 2 sqrt(eps) |psi'|: " + std::to_string(bad) + " violations");
  c.check(bad_plus == 0, "int u+ psi >= psi(0) / (4 sqrt(eps)) for eps <= 1e-2: " + std::to_string(bad_plus) + " violations");
  const TraceReport up = lim_trace(find_entry("counterexample-u-plus").make(2), p);
  c.check(up.diverges, std::string("trace of u+ flagged divergent: ") + (up.diverges ? "yes" : "no"));
  const TraceReport vp = lim_trace(find_entry("counterexample-v-plus").make(2), p);
  const double psi0 = p(Coords{0.0});
  c.check(!vp.diverges && std::abs(vp.limit - psi0) <= 1e-2, "trace of v+ " + num(vp.limit) + " vs psi(0) = " + num(psi0));
}

// ----------------------------------------------------------------- 9
void corpus(Criterion& c) {
  const auto rows = run_corpus(2);
  for (const SuiteOutcome& o : rows)
    c.check(o.passed, o.entry + " " + o.suite + ": expected " + o.expected + ", observed " + o.observed);
  const ScalarField one = constant_field(2, 1);
  ScanOptions opt;
  opt.levels = 18;  // I ~ 1/R needs this many doublings to fall below the verdict tolerance
  const RingScanReport cls = scan(one, 0, HalfSpacePoint{0, 1}, RingCondition::classical, opt);
  const RingScanReport rp0 = scan(one, 0, HalfSpacePoint{0, 1}, RingCondition::ring_plus_zero, opt);
  c.check(cls.verdict == Verdict::not_satisfied && std::abs(cls.fitted_slope) < 0.1,
          "u=1 (R): " + to_string(cls.verdict) + ", slope " + num(cls.fitted_slope));
  c.check(rp0.verdict == Verdict::satisfied && std::abs(rp0.fitted_slope + 1) <= 0.2,
          "u=1 (R+0): " + to_string(rp0.verdict) + ", slope " + num(rp0.fitted_slope));
}

// ----------------------------------------------------------------- 10
void unotl1c(Criterion& c) {
  const ScalarField u = find_entry("unotl1c").make(2);
  const double r1 = fd_harmonic_residual(u, 4e-2), r2 = fd_harmonic_residual(u, 2e-2);
  c.check(r2 <= 0.3 * r1, "FD residual " + num(r1) + " -> " + num(r2) + " (ratio " + num(r2 / r1) + ")");
  const RingScanReport r = scan(u, 0, HalfSpacePoint{0, 1}, RingCondition::ring_plus_zero);
  c.check(r.verdict == Verdict::satisfied, "(R+0) " + to_string(r.verdict) + ", slope " + num(r.fitted_slope));
  const double j1 = boundary_local_l1(u, 1e-1), j3 = boundary_local_l1(u, 1e-3);
  c.check(j3 >= 10 * j1, "boundary L1: " + num(j1) + " (delta=1e-1) -> " + num(j3) + " (delta=1e-3), growth " +
                             num(j3 / j1) + " (need >= 10)");
}

// ----------------------------------------------------------------- 11
std::string run_cli(const std::string& out) {
  const std::string cmd = std::string(HSP_CLI) + " corpus-run --dim 2 --seed 7 --quiet --out " + out;
  const int rc = std::system(cmd.c_str());
  std::ifstream f(out, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return rc == 0 ? ss.str() : std::string();
}

void determinism(Criterion& c) {
  const std::string a = run_cli("determinism_a.csv"), b = run_cli("determinism_b.csv");
  c.check(!a.empty(), "corpus-run exit 0, " + std::to_string(a.size()) + " bytes");
  c.check(!a.empty() && a == b, "repeated corpus-run byte-identical");
  const std::string json_a = to_json(run_corpus(2, {}, {"constant", "green-delta"})).dump();
  QuadratureSpec serial;
  serial.exec = Execution::serial;
  const std::string json_b = to_json(run_corpus(2, serial, {"constant", "green-delta"})).dump();
  c.check(json_a == json_b, "serial and parallel execution agree bitwise");
}

const std::vector<std::pair<const char*, std::function<void(Criterion&)>>> kCriteria = {
    {"kernel audit", kernel_audit},
    {"Poisson normalization", poisson_normalization},
    {"kernel asymptotics", asymptotics},
    {"representation round trip", round_trip},
    {"trivial exactness", trivial_exactness},
    {"green-ring normalization", green_ring},
    {"lifted superharmonic suite", huber_suite},
    {"counterexample suite", counterexample},
    {"corpus verdicts", corpus},
    {"boundary non-integrable harmonic field", unotl1c},
    {"determinism", determinism},
};

bool run(int k) {
  Criterion c{k};
  const auto& [name, fn] = kCriteria[k - 1];
  std::printf("criterion %d (%s)\n", k, name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    fn(c);
  } catch (const std::exception& e) {
    c.check(false, std::string("exception: ") + e.what());
  }
  std::printf("criterion %d: %s (%.1f s)\n", k, c.ok ? "PASS" : "FAIL", seconds_since(t0));
  std::fflush(stdout);
  return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
  const int total = static_cast<int>(kCriteria.size());
  if (argc > 1) {
    const int k = std::atoi(argv[1]);
    if (k < 1 || k > total) {
      std::fprintf(stderr, "usage: acceptance [1..%d]\n", total);
      return 2;
    }
    return run(k) ? 0 : 1;
  }
  bool all = true;
  for (int k = 1; k <= total; ++k) all = run(k) && all;
  return all ? 0 : 1;
}
