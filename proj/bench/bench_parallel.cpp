// Serial vs OpenMP execution of the batched cubature engine. Arg 0 = serial,
// 1 = parallel; the computed values are identical either way.

#include <benchmark/benchmark.h>

#include "hsp/corpus.hpp"
#include "hsp/measures.hpp"
#include "hsp/potentials.hpp"
#include "hsp/rings.hpp"
#include "hsp/weakform.hpp"

using namespace hsp;

namespace {

QuadratureSpec spec(const benchmark::State& state) {
  QuadratureSpec q;
  q.exec = state.range(0) ? Execution::parallel : Execution::serial;
  return q;
}

RepresentationTriple round_trip(int n) {
  RepresentationTriple t = RepresentationTriple::zero(n, 0.3);
  t.nu = density_measure<Side::boundary>(n, named_density("gauss", n - 1, Side::boundary));
  Coords at(n);
  at[n - 1] = 1;
  t.mu = dirac(HalfSpacePoint(at));
  return t;
}

void BM_GaussPoissonIntegral(benchmark::State& state) {
  const QuadratureSpec q = spec(state);
  const RepresentationTriple t = round_trip(3);
  const HalfSpacePoint x{0.3, -0.2, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(poisson_integral(t.nu, x, q));
}

void BM_RingScan(benchmark::State& state) {
  const QuadratureSpec q = spec(state);
  const ScalarField u = find_entry("green-delta").make(2);
  ScanOptions opt;
  opt.levels = 6;
  for (auto _ : state) benchmark::DoNotOptimize(scan(u, 0, HalfSpacePoint{0, 1}, RingCondition::ring_plus_zero, opt, q));
}

void BM_WeakResidual(benchmark::State& state) {
  const QuadratureSpec q = spec(state);
  const RepresentationTriple t = round_trip(2);
  const ScalarField u = represent(t, q);
  const auto battery = standard_battery(2);
  for (auto _ : state) benchmark::DoNotOptimize(weak_residual(u, t.mu, t.nu, battery, q));
}

}  // namespace

BENCHMARK(BM_GaussPoissonIntegral)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RingScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeakResidual)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
