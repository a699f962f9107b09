#include <benchmark/benchmark.h>

#include "txh/spectra.hpp"

using namespace txh;

namespace {

FieldConfig loaded_fields() {
  FieldConfig f;
  f.b_field = Vec3(0.05, -0.07, 0.1);
  f.e_field = Vec3(3e4, 8e4, -1e4);
  f.ext_stress = stress_for_direction(0.4, -3e7);
  return f;
}

void BM_Eigensolve(benchmark::State& state) {
  const ComplexMatrix4 h = assemble_tx_hamiltonian(orientations()[5], loaded_fields(), ModelParams{});
  for (auto _ : state) benchmark::DoNotOptimize(eig_hermitian_4(h));
}
BENCHMARK(BM_Eigensolve);

void BM_Assemble(benchmark::State& state) {
  const FieldConfig f = loaded_fields();
  const ModelParams p;
  for (auto _ : state) benchmark::DoNotOptimize(assemble_tx_hamiltonian(orientations()[17], f, p));
}
BENCHMARK(BM_Assemble);

void BM_TransitionSet(benchmark::State& state) {
  FieldConfig f;
  f.b_field = Vec3(0, 0.07, 0.08);
  const ModelParams p;
  for (auto _ : state) benchmark::DoNotOptimize(transition_set(orientations()[9], f, p));
}
BENCHMARK(BM_TransitionSet);

void BM_RotationSweep(benchmark::State& state) {
  const ModelParams p;
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(field_rotation_sweep(Vec3(0, 0, 1), Vec3(-1, 1, 0), steps, 0.1099, p));
  state.SetItemsProcessed(state.iterations() * steps * OrientationSet::kCount);
}
BENCHMARK(BM_RotationSweep)->Arg(91)->Arg(361);

void BM_StarkSweep(benchmark::State& state) {
  const ModelParams p;
  for (auto _ : state) benchmark::DoNotOptimize(stark_sweep(Vec3(1, 1, 0), 125e3, 101, p));
}
BENCHMARK(BM_StarkSweep);

}  // namespace

BENCHMARK_MAIN();
