// hsp: command-line front end for the half-space potential toolkit.
//
// Exit codes: 0 ok, 1 an expected verdict failed, 2 bad input,
// 3 quadrature did not converge. Reports are assembled in memory and only
// written when the command completes, so error exits never leave partial
// output behind.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsp/corpus.hpp"
#include "hsp/estimates.hpp"
#include "hsp/expression.hpp"
#include "hsp/huber.hpp"
#include "hsp/kernels.hpp"
#include "hsp/measures.hpp"
#include "hsp/potentials.hpp"
#include "hsp/report.hpp"
#include "hsp/rings.hpp"
#include "hsp/weakform.hpp"

using namespace hsp;
using nlohmann::json;

namespace {

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Config {
  int dim = 2;
  double tol = 1e-6;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  std::vector<std::string> measures;
  bool quiet = false;

  // field selection
  std::string corpus, field;
  double h = 0;
};

struct Result {
  std::string text;
  int code = 0;
  std::string summary;  // one line for stderr unless --quiet
};

Coords parse_coords(const std::string& s, int n, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (static_cast<int>(v.size()) != n)
    throw InputError(std::string(what) + " needs " + std::to_string(n) + " comma-separated numbers");
  return Coords(std::span<const double>(v));
}

HalfSpacePoint parse_point(const std::string& s, int n, const char* what) {
  HalfSpacePoint p(parse_coords(s, n, what));
  if (!p.interior()) throw InputError(std::string(what) + " must lie in the open half-space");
  return p;
}

QuadratureSpec quadrature(const Config& c) {
  if (!(c.tol > 0 && c.tol < 1)) throw InputError("--tol must lie in (0, 1)");
  QuadratureSpec q;
  q.rel_tol = c.tol;
  q.seed = c.seed;
  return q;
}

template <class M>
void merge(M& into, const M& m) {
  auto add = [](MeasurePart& a, const MeasurePart& b) {
    a.atoms.insert(a.atoms.end(), b.atoms.begin(), b.atoms.end());
    a.densities.insert(a.densities.end(), b.densities.begin(), b.densities.end());
  };
  add(into.positive, m.positive);
  add(into.negative, m.negative);
  into.is_signed = into.is_signed || m.is_signed;
}

RepresentationTriple load_triple(const Config& c) {
  RepresentationTriple t = RepresentationTriple::zero(c.dim, c.h);
  for (const std::string& path : c.measures) {
    AnyMeasure m = load_measure_file(path);
    std::visit(
        [&](auto& mm) {
          if (mm.dim != c.dim)
            throw InputError(path + ": measure dimension " + std::to_string(mm.dim) + " differs from --dim " +
                             std::to_string(c.dim));
          using T = std::decay_t<decltype(mm)>;
          if constexpr (std::is_same_v<T, InteriorMeasure>)
            merge(t.mu, mm);
          else
            merge(t.nu, mm);
        },
        m);
  }
  return t;
}

// Field from --corpus, --field, or the measures (assembled representation).
ScalarField resolve_field(const Config& c, const QuadratureSpec& q, const CorpusEntry** entry = nullptr) {
  const int chosen = !c.corpus.empty() + !c.field.empty();
  if (chosen > 1) throw InputError("give at most one of --corpus and --field");
  if (!c.corpus.empty()) {
    const CorpusEntry& e = find_entry(c.corpus);
    if (!e.supports(c.dim)) throw InputError("corpus entry '" + c.corpus + "' is not defined in this dimension");
    if (entry) *entry = &e;
    return e.make(c.dim);
  }
  if (!c.field.empty()) return expression_field(c.field, c.dim);
  if (c.measures.empty()) throw InputError("no field: give --corpus, --field, or --measure files");
  return represent(load_triple(c), q);
}

std::string render(const Config& c, const std::string& csv, const json& j) {
  if (c.format == "json") return j.dump(2) + "\n";
  return csv;
}

// ---------------------------------------------------------------- commands

struct KernelArgs {
  std::string x, y, yprime, which = "green";
  double eps = 0;
};

Result cmd_kernel(const Config& c, const KernelArgs& a) {
  const HalfSpacePoint x = parse_point(a.x, c.dim, "--x");
  const Regularization eps(a.eps);
  Result r;
  std::vector<std::pair<std::string, double>> values;
  if (a.which == "poisson") {
    if (a.yprime.empty()) throw InputError("--which poisson needs --yprime");
    values.emplace_back("poisson", poisson(x, parse_coords(a.yprime, c.dim - 1, "--yprime"), eps));
  } else {
    if (a.y.empty()) throw InputError("--which " + a.which + " needs --y");
    const HalfSpacePoint y(parse_coords(a.y, c.dim, "--y"));
    if (a.which == "green") {
      values.emplace_back("green", green(x, y, eps));
    } else if (a.which == "fundamental") {
      values.emplace_back("fundamental", fundamental(x, y, eps));
    } else if (a.which == "grad") {
      const Coords g = grad_green(x, y, eps);
      for (int i = 0; i < g.size(); ++i) values.emplace_back("grad" + std::to_string(i + 1), g[i]);
    } else {
      throw InputError("--which must be green, poisson, grad or fundamental");
    }
  }
  std::string csv = "quantity,value\n";
  json j = json::object();
  for (const auto& [k, v] : values) {
    csv += k + "," + fmt(v) + "\n";
    j[k] = jnum(v);
  }
  r.text = render(c, csv, j);
  return r;
}

Result cmd_represent(const Config& c, const std::vector<std::string>& at) {
  const QuadratureSpec q = quadrature(c);
  const RepresentationTriple t = load_triple(c);
  const ScalarField u = represent(t, q);
  if (at.empty()) throw InputError("represent needs at least one --at point");
  std::string csv;
  for (int i = 0; i < c.dim; ++i) csv += "x" + std::to_string(i + 1) + ",";
  csv += "u\n";
  json rows = json::array();
  for (const std::string& s : at) {
    const HalfSpacePoint x = parse_point(s, c.dim, "--at");
    const double v = u(x);
    json p = json::array();
    for (int i = 0; i < c.dim; ++i) {
      csv += fmt(x[i]) + ",";
      p.push_back(x[i]);
    }
    csv += fmt(v) + "\n";
    rows.push_back({{"x", p}, {"u", jnum(v)}});
  }
  Result r;
  r.text = render(c, csv, {{"h", t.h}, {"mu", serialize(t.mu)}, {"nu", serialize(t.nu)}, {"values", rows}});
  return r;
}

struct ScanArgs {
  std::string condition = "r-plus", x, expect;
  std::optional<int> levels;
  double R0 = 0, verdict_tol = 1e-4;
};

Result cmd_ring_scan(const Config& c, const ScanArgs& a) {
  const QuadratureSpec q = quadrature(c);
  const CorpusEntry* entry = nullptr;
  const ScalarField u = resolve_field(c, q, &entry);
  const RingCondition cond = parse_condition(a.condition);
  Coords en(c.dim);
  en[c.dim - 1] = 1;
  const HalfSpacePoint x = a.x.empty() ? HalfSpacePoint(en) : parse_point(a.x, c.dim, "--x");
  // corpus expectations are stated at e_N; inherit the one for this condition and h
  const Expectation* known = nullptr;
  if (entry && a.x.empty())
    for (const Expectation& e : entry->expected)
      if (e.suite == to_string(cond) && e.h == c.h) known = &e;
  ScanOptions opt;
  opt.levels = a.levels ? *a.levels : known ? known->levels : 8;
  if (opt.levels < 2 || opt.levels > 60) throw InputError("--levels must lie in [2, 60]");
  opt.R0 = a.R0;
  opt.verdict_tol = a.verdict_tol;
  const RingScanReport rep = scan(u, c.h, x, cond, opt, q);
  Result r;
  r.text = render(c, to_csv(rep), to_json(rep));
  const std::string expected = !a.expect.empty() ? a.expect : known ? known->expected : "";
  r.summary = "verdict " + to_string(rep.verdict) + (expected.empty() ? "" : " (expected " + expected + ")");
  if (!expected.empty() && expected != to_string(rep.verdict)) r.code = 1;
  return r;
}

struct WeakArgs {
  std::string mode = "equality";
  double threshold = 1e-3;
};

Result cmd_weak_residual(const Config& c, const WeakArgs& a) {
  const QuadratureSpec q = quadrature(c);
  const RepresentationTriple t = load_triple(c);
  const bool assembled = c.corpus.empty() && c.field.empty();
  const ScalarField u = assembled ? represent(t, q) : resolve_field(c, q);
  WeakMode mode;
  if (a.mode == "equality")
    mode = WeakMode::equality;
  else if (a.mode == "inequality")
    mode = WeakMode::inequality;
  else
    throw InputError("--mode must be equality or inequality");
  const WeakResidualReport rep = weak_residual(u, t.mu, t.nu, standard_battery(c.dim), q, mode);
  Result r;
  r.text = render(c, to_csv(rep), to_json(rep));
  r.summary = "max residual " + fmt(rep.max_residual);
  if (!(rep.max_residual <= a.threshold)) r.code = 1;
  return r;
}

struct TraceArgs {
  std::string center, profile = "bump";
  double width = 1, tolerance = 1e-3;
  std::optional<double> target;
};

Result cmd_trace_scan(const Config& c, const TraceArgs& a) {
  const QuadratureSpec q = quadrature(c);
  const ScalarField u = resolve_field(c, q);
  Profile psi;
  psi.center = a.center.empty() ? Coords(c.dim - 1) : parse_coords(a.center, c.dim - 1, "--psi-center");
  if (!(a.width > 0)) throw InputError("--psi-width must be positive");
  psi.width = a.width;
  psi.gauss = 0.5 * a.width;
  if (a.profile == "gauss-bump")
    psi.kind = Profile::Kind::gauss_bump;
  else if (a.profile != "bump")
    throw InputError("--profile must be bump or gauss-bump");
  TraceReport rep = lim_trace(u, psi, default_ladder(), q);
  if (a.target) {
    rep.target = a.target;
  } else if (!c.measures.empty()) {
    const RepresentationTriple t = load_triple(c);
    rep.target = pair_boundary(t.nu, [&psi](const Coords& y) { return psi(y); }, psi.support(), q);
  }
  Result r;
  r.text = render(c, to_csv(rep), to_json(rep));
  r.summary = rep.diverges ? "diverges" : "limit " + fmt(rep.limit);
  if (rep.target && (rep.diverges || !(std::abs(rep.limit - *rep.target) <= a.tolerance * std::max(1.0, std::abs(*rep.target)))))
    r.code = 1;
  return r;
}

struct HuberArgs {
  std::string x;
  double R = 8, gamma = 0.5, tau = 0.8, c = 0, radius = 0.5;
  int probes = 20;
};

Result cmd_huber_check(const Config& c, const HuberArgs& a) {
  const QuadratureSpec q = quadrature(c);
  const ScalarField u = resolve_field(c, q);
  Coords en(c.dim);
  en[c.dim - 1] = 1;
  const HalfSpacePoint x = a.x.empty() ? HalfSpacePoint(en) : parse_point(a.x, c.dim, "--x");
  std::string csv = "check,lhs,rhs,holds\n";
  json j = json::array();
  bool ok = true;
  auto row = [&](const std::string& name, double lhs, double rhs, bool holds) {
    csv += name + "," + fmt(lhs) + "," + fmt(rhs) + "," + (holds ? "1" : "0") + "\n";
    j.push_back({{"check", name}, {"lhs", jnum(lhs)}, {"rhs", jnum(rhs)}, {"holds", holds}});
    ok = ok && holds;
  };
  if (annulus_comparison_applies(x, a.R, a.gamma)) {
    const Comparison cmp = annulus_comparison(u, a.c, x, a.R, a.gamma, q);
    row("annulus-comparison", cmp.lhs, cmp.rhs, cmp.holds);
  }
  if (annulus_split_applies(x, a.R, a.tau)) {
    const Comparison cmp = annulus_split_bound(u, x, a.R, a.tau, q);
    row("annulus-split", cmp.lhs, cmp.rhs, cmp.holds);
  }
  // lifted mean values at probes around x (inequality oracle for superharmonic u)
  const LiftedField v = lift(u);
  for (int i = 0; i < a.probes; ++i) {
    LiftedPoint center = lifted_point(x.tangential(), x.height(), 0, 0);
    center[0] += 0.1 * i;
    const SphericalMean m = spherical_mean(v, center, a.radius, q);
    const double cv = v(center);
    row("mean-value-" + std::to_string(i), m.mean, cv, m.mean <= cv + m.tol);
  }
  Result r;
  r.text = render(c, csv, j);
  r.summary = ok ? "all checks hold" : "a check failed";
  r.code = ok ? 0 : 1;
  return r;
}

Result cmd_estimates_audit(const Config& c, std::size_t samples) {
  const AuditReport a = estimates_audit(c.dim, samples, c.seed);
  std::string csv = "check,violations,worst\n";
  csv += "symmetry," + std::to_string(a.symmetry_violations) + "," + fmt(a.max_symmetry_rel) + "\n";
  csv += "monotone_eps," + std::to_string(a.monotone_violations) + ",\n";
  csv += "gradient_fd," + std::to_string(a.gradient_violations) + "," + fmt(a.max_gradient_fd_rel) + "\n";
  json checks = json::array();
  checks.push_back({{"check", "symmetry"}, {"violations", a.symmetry_violations}, {"worst", jnum(a.max_symmetry_rel)}});
  checks.push_back({{"check", "monotone_eps"}, {"violations", a.monotone_violations}});
  checks.push_back(
      {{"check", "gradient_fd"}, {"violations", a.gradient_violations}, {"worst", jnum(a.max_gradient_fd_rel)}});
  for (const BoundCheck& b : a.bounds) {
    csv += b.name + "," + std::to_string(b.violations) + "," + fmt(b.worst_ratio) + "\n";
    checks.push_back({{"check", b.name}, {"violations", b.violations}, {"worst", jnum(b.worst_ratio)}});
  }
  Result r;
  r.text = render(c, csv, {{"dim", a.dim}, {"samples", a.samples}, {"seed", c.seed}, {"checks", checks}});
  r.summary = std::to_string(a.total_violations()) + " violations";
  r.code = a.total_violations() == 0 ? 0 : 1;
  return r;
}

Result cmd_corpus_run(const Config& c, const std::vector<std::string>& only, bool dump) {
  Result r;
  if (dump) {
    r.text = registry_json().dump(2) + "\n";
    return r;
  }
  const auto rows = run_corpus(c.dim, quadrature(c), only);
  r.text = render(c, to_csv(rows), to_json(rows));
  std::size_t failed = 0;
  for (const SuiteOutcome& o : rows) failed += !o.passed;
  r.summary = std::to_string(rows.size() - failed) + "/" + std::to_string(rows.size()) + " expectations met";
  r.code = failed == 0 ? 0 : 1;
  return r;
}

void emit(const Config& c, const Result& r) {
  if (c.out.empty() || c.out == "-") {
    std::fwrite(r.text.data(), 1, r.text.size(), stdout);
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw InputError("cannot write " + c.out);
    f << r.text;
  }
  if (!c.quiet && !r.summary.empty()) std::fprintf(stderr, "%s\n", r.summary.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Half-space potential theory toolkit"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // -h would clash with --h
  Config cfg;
  app.add_option("--dim", cfg.dim, "half-space dimension N")->check(CLI::Range(2, kMaxDim));
  app.add_option("--tol", cfg.tol, "relative quadrature tolerance");
  app.add_option("--seed", cfg.seed, "seed for sampling");
  app.add_option("--out", cfg.out, "report path (default stdout)");
  app.add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--measure", cfg.measures, "measure file (repeatable; interior/boundary read from the file)");
  app.add_flag("--quiet", cfg.quiet, "no summary on stderr");

  auto field_opts = [&cfg](CLI::App* s) {
    s->set_help_flag("--help", "print help");
    s->add_option("--corpus", cfg.corpus, "corpus entry name");
    s->add_option("--field", cfg.field, "field expression over x1..xN");
    s->add_option("--h", cfg.h, "slope h of the harmonic part");
  };

  KernelArgs ka;
  auto* kernel = app.add_subcommand("kernel", "evaluate a kernel at one pair of points");
  kernel->add_option("--x", ka.x)->required();
  kernel->add_option("--y", ka.y);
  kernel->add_option("--yprime", ka.yprime);
  kernel->add_option("--eps", ka.eps);
  kernel->add_option("--which", ka.which)->check(CLI::IsMember({"green", "poisson", "grad", "fundamental"}));

  std::vector<std::string> at;
  auto* represent_cmd = app.add_subcommand("represent", "evaluate h x_N + P[nu] + G[mu] at points");
  represent_cmd->add_option("--at", at, "point (repeatable)");
  represent_cmd->set_help_flag("--help", "print help");
  represent_cmd->add_option("--h", cfg.h);

  ScanArgs sa;
  auto* ring = app.add_subcommand("ring-scan", "ring integrals over a dyadic radius ladder");
  field_opts(ring);
  ring->add_option("--condition", sa.condition, "r | r-plus | r-plus-0 | ball-limit | green-ring | ring-d");
  ring->add_option("--x", sa.x, "centre (default e_N)");
  ring->add_option("--levels", sa.levels);
  ring->add_option("--R0", sa.R0);
  ring->add_option("--verdict-tol", sa.verdict_tol);
  ring->add_option("--expect", sa.expect)->check(CLI::IsMember({"satisfied", "not-satisfied", "inconclusive"}));

  WeakArgs wa;
  auto* weak = app.add_subcommand("weak-residual", "weak formulation residual over the test battery");
  field_opts(weak);
  weak->add_option("--mode", wa.mode)->check(CLI::IsMember({"equality", "inequality"}));
  weak->add_option("--threshold", wa.threshold);

  TraceArgs ta;
  auto* tr = app.add_subcommand("trace-scan", "boundary pairings on a decreasing height ladder");
  field_opts(tr);
  tr->add_option("--psi-center", ta.center);
  tr->add_option("--psi-width", ta.width);
  tr->add_option("--profile", ta.profile)->check(CLI::IsMember({"bump", "gauss-bump"}));
  tr->add_option("--target", ta.target);
  tr->add_option("--target-tol", ta.tolerance);

  HuberArgs ha;
  auto* hub = app.add_subcommand("huber-check", "lifted mean values and annulus inequalities");
  field_opts(hub);
  hub->add_option("--x", ha.x);
  hub->add_option("--R", ha.R);
  hub->add_option("--gamma", ha.gamma);
  hub->add_option("--tau", ha.tau);
  hub->add_option("--c", ha.c);
  hub->add_option("--radius", ha.radius, "sphere radius for mean values");
  hub->add_option("--probes", ha.probes);

  std::size_t samples = 1000;
  auto* audit = app.add_subcommand("estimates-audit", "kernel bound battery on seeded samples");
  audit->add_option("--samples", samples);

  std::vector<std::string> only;
  bool dump = false;
  auto* corpus = app.add_subcommand("corpus-run", "check every corpus expectation");
  corpus->add_option("--only", only, "entry name (repeatable)");
  corpus->add_flag("--dump", dump, "print the registry as JSON instead");

  for (CLI::App* s : app.get_subcommands({})) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Result r;
    if (kernel->parsed())
      r = cmd_kernel(cfg, ka);
    else if (represent_cmd->parsed())
      r = cmd_represent(cfg, at);
    else if (ring->parsed())
      r = cmd_ring_scan(cfg, sa);
    else if (weak->parsed())
      r = cmd_weak_residual(cfg, wa);
    else if (tr->parsed())
      r = cmd_trace_scan(cfg, ta);
    else if (hub->parsed())
      r = cmd_huber_check(cfg, ha);
    else if (audit->parsed())
      r = cmd_estimates_audit(cfg, samples);
    else
      r = cmd_corpus_run(cfg, only, dump);
    emit(cfg, r);
    return r.code;
  } catch (const QuadratureFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    // bad input: invalid arguments, measure/expression errors, coincident points
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
