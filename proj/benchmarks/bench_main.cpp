// Serial-vs-parallel benchmarks for the grid kernels, plus the algebra
// micro-kernels they are built from.  The parallel execution policy writes
// each node into its own slot and reduces serially, so both policies return
// bit-identical results; these benchmarks measure what that determinism
// costs or buys on the current machine.

#include <benchmark/benchmark.h>

#include <complex>

#include "ruled4/construct.hpp"
#include "ruled4/evolve.hpp"
#include "ruled4/octonion.hpp"
#include "ruled4/patch.hpp"

using namespace ruled4;
using cx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

const RuledPatch& family_patch() {
  static const RuledPatch p = make_example_m(
      1, HoloField::linear(cx(0.3, -0.2), cx(0.0, 1.0)),
      GridSpec{64, 64, 2.0 * kPi / 64, 2.0 * kPi / 64, 0.0, 0.0, true, true});
  return p;
}

RuledPatch stencil_only_patch() {
  RuledPatch p = family_patch();
  p.dphi1_ds.reset();
  p.dphi1_dt.reset();
  p.dphi2_ds.reset();
  p.dphi2_dt.reset();
  p.dpsi_ds.reset();
  p.dpsi_dt.reset();
  return p;
}

void bm_patch_derivs(benchmark::State& state, Exec exec) {
  const RuledPatch p = stencil_only_patch();
  for (auto _ : state) {
    const PatchDerivs d = patch_derivs(p, DerivMode::stencil, exec);
    benchmark::DoNotOptimize(d.dphi1_ds.data());
  }
}

void bm_quadratic(benchmark::State& state, Exec exec) {
  const RuledPatch p = stencil_only_patch();
  for (auto _ : state) {
    const ResidualReport r = residuals_quadratic(p, DerivMode::stencil, exec);
    benchmark::DoNotOptimize(r.equations.data());
  }
}

void bm_evolution_residuals(benchmark::State& state, Exec exec) {
  const RuledPatch& p = family_patch();
  for (auto _ : state) {
    const EvolutionResiduals r =
        residuals_evolution(p, DerivMode::analytic, exec);
    benchmark::DoNotOptimize(r.f.data());
  }
}

void bm_evolve_step(benchmark::State& state, Exec exec) {
  const int n = 256;
  const GridSpec line{n, 1, 2.0 * kPi / n, 1.0, 0.0, 0.0, true, false};
  const InitialData init = initial_from_patch_row(
      make_example_m(1, HoloField::zero(), line), 0);
  EvolveOptions opts;
  opts.exec = exec;
  for (auto _ : state) {
    const EvolveResult r = evolve(init, 0.01, 1, opts);
    benchmark::DoNotOptimize(r.patch.phi1.data());
  }
}

void bm_triple_cross(benchmark::State& state) {
  Vec8 x = normalized({0.3, -0.1, 0.7, 0.2, -0.4, 0.5, 0.1, -0.2});
  Vec8 y = normalized({-0.2, 0.6, 0.1, -0.5, 0.3, 0.2, -0.7, 0.1});
  Vec8 z = normalized({0.5, 0.2, -0.3, 0.1, 0.6, -0.1, 0.2, 0.4});
  for (auto _ : state) {
    Vec8 t = triple_cross(x, y, z);
    benchmark::DoNotOptimize(t.data());
    x[0] += 1e-15;  // defeat loop-invariant hoisting
  }
}

void bm_fourfold_cross(benchmark::State& state) {
  Vec8 x = normalized({0.3, -0.1, 0.7, 0.2, -0.4, 0.5, 0.1, -0.2});
  Vec8 y = normalized({-0.2, 0.6, 0.1, -0.5, 0.3, 0.2, -0.7, 0.1});
  Vec8 z = normalized({0.5, 0.2, -0.3, 0.1, 0.6, -0.1, 0.2, 0.4});
  Vec8 u = normalized({0.1, 0.4, 0.2, 0.6, -0.2, 0.3, 0.5, -0.1});
  for (auto _ : state) {
    Vec8 t = fourfold_cross(x, y, z, u);
    benchmark::DoNotOptimize(t.data());
    x[0] += 1e-15;
  }
}

}  // namespace

BENCHMARK_CAPTURE(bm_patch_derivs, serial, Exec::serial);
BENCHMARK_CAPTURE(bm_patch_derivs, parallel, Exec::parallel);
BENCHMARK_CAPTURE(bm_quadratic, serial, Exec::serial);
BENCHMARK_CAPTURE(bm_quadratic, parallel, Exec::parallel);
BENCHMARK_CAPTURE(bm_evolution_residuals, serial, Exec::serial);
BENCHMARK_CAPTURE(bm_evolution_residuals, parallel, Exec::parallel);
BENCHMARK_CAPTURE(bm_evolve_step, serial, Exec::serial);
BENCHMARK_CAPTURE(bm_evolve_step, parallel, Exec::parallel);
BENCHMARK(bm_triple_cross);
BENCHMARK(bm_fourfold_cross);

BENCHMARK_MAIN();
