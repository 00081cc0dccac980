#include <benchmark/benchmark.h>

#include "aeqnd/angmom.hpp"
#include "aeqnd/diagnostics.hpp"
#include "aeqnd/dynamics.hpp"
#include "aeqnd/lightmatter.hpp"
#include "aeqnd/linalg.hpp"
#include "aeqnd/protocols.hpp"
#include "aeqnd/species.hpp"
#include "aeqnd/structure.hpp"
#include "aeqnd/units.hpp"

using namespace aeqnd;

namespace {

const Species& sr() {
  static const Species s = species_registry("Sr87");
  return s;
}

void BM_ClebschGordanCold(benchmark::State& state) {
  for (auto _ : state) {
    clear_angmom_cache();
    benchmark::DoNotOptimize(clebsch_gordan(half(13), half(1), half(9), half(-1), half(12), 0));
  }
}
BENCHMARK(BM_ClebschGordanCold);

void BM_ClebschGordanCached(benchmark::State& state) {
  clebsch_gordan(half(13), half(1), half(9), half(-1), half(12), 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(clebsch_gordan(half(13), half(1), half(9), half(-1), half(12), 0));
  }
}
BENCHMARK(BM_ClebschGordanCached);

void BM_Wigner6jCold(benchmark::State& state) {
  for (auto _ : state) {
    clear_angmom_cache();
    benchmark::DoNotOptimize(wigner6j(half(13), half(9), half(4), half(2), half(2), half(11)));
  }
}
BENCHMARK(BM_Wigner6jCold);

void BM_HyperfineEigensolve(benchmark::State& state) {
  const Manifold p = sr().manifold("1P1");
  for (auto _ : state) benchmark::DoNotOptimize(eigh(hyperfine_hamiltonian(p).m));
}
BENCHMARK(BM_HyperfineEigensolve);

void BM_LightShiftAndJumps(benchmark::State& state) {
  LaserCoupling c;
  c.lower = sr().manifold("1S0");
  c.upper = sr().manifold("1P1");
  c.rabi = mhz(50.0);
  c.detuning = mhz(1e4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(light_shift_operator(c));
    benchmark::DoNotOptimize(jump_operators(c));
  }
}
BENCHMARK(BM_LightShiftAndJumps);

void BM_DressedSpectrum(benchmark::State& state) {
  const Manifold a = sr().by_role("singlet");
  const Manifold b = sr().by_role("dressing");
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dressed_mj0_levels(dressing_hamiltonian(a, b, mhz(1000.0), DressingModel::kResolved)));
  }
}
BENCHMARK(BM_DressedSpectrum);

void BM_QuenchEvolve(benchmark::State& state) {
  std::vector<double> deltas;
  for (int k = 0; k < state.range(0); ++k) deltas.push_back(mhz(0.3 * k));
  const double gamma = mhz(30.0);
  QuenchModel q = build_quench_model(deltas, gamma, 10.0 / gamma);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(q.problem, q.initial));
}
BENCHMARK(BM_QuenchEvolve)->Arg(2)->Arg(10);

void BM_LeakagePoint(benchmark::State& state) {
  set_warning_sink(nullptr);
  const ScenarioConfig cfg = default_config(Scenario::kLeakageSweep);
  for (auto _ : state) {
    benchmark::DoNotOptimize(leakage_point(cfg.primary(), mhz(static_cast<double>(state.range(0))), cfg));
  }
}
BENCHMARK(BM_LeakagePoint)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
