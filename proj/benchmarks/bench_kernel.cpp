#include <benchmark/benchmark.h>

#include "coopemit/cloud.hpp"
#include "coopemit/dicke.hpp"
#include "coopemit/dynamics.hpp"
#include "coopemit/kernel.hpp"
#include "coopemit/observables.hpp"

using namespace coopemit;

namespace {

AtomicCloud cloud(int n) {
  CloudParams p;
  p.n_atoms = n;
  p.r0 = 10.0;
  p.seed = 1;
  return sample_cloud(p);
}

}  // namespace

static void BM_AssembleDecayMatrix(benchmark::State& state) {
  const AtomicCloud c = cloud(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_decay_matrix(c));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssembleDecayMatrix)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);

static void BM_Eigendecomposition(benchmark::State& state) {
  const AtomicCloud c = cloud(static_cast<int>(state.range(0)));
  const Eigen::MatrixXcd g = assemble_decay_matrix(c);
  for (auto _ : state) benchmark::DoNotOptimize(DecayMatrix(g, 1.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Eigendecomposition)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oNCubed)->Unit(benchmark::kMillisecond);

static void BM_StreamedQuadraticForms(benchmark::State& state) {
  const AtomicCloud c = cloud(static_cast<int>(state.range(0)));
  const std::vector<Eigen::VectorXcd> v{initial_state(c).amplitudes, afterglow_state(c).h};
  for (auto _ : state) benchmark::DoNotOptimize(streamed_quadratic_forms(c, v));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_StreamedQuadraticForms)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oNSquared);

static void BM_Evolve(benchmark::State& state) {
  const AtomicCloud c = cloud(static_cast<int>(state.range(0)));
  const DecayMatrix dm = build_decay_matrix(c);
  const AmplitudeState psi0 = initial_state(c);
  double t = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(psi0, dm, t += 1e-3));
}
BENCHMARK(BM_Evolve)->Arg(256)->Arg(512);

static void BM_SymmetricCouplings(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXcd g = assemble_decay_matrix(cloud(n));
  const DickeBasis b = build_basis(n);
  for (auto _ : state) benchmark::DoNotOptimize(build_symmetric_couplings(g, b));
}
BENCHMARK(BM_SymmetricCouplings)->Arg(256)->Arg(1024);

static void BM_AngularPattern(benchmark::State& state) {
  const AtomicCloud c = cloud(static_cast<int>(state.range(0)));
  const AmplitudeState psi0 = initial_state(c);
  for (auto _ : state) benchmark::DoNotOptimize(angular_pattern(psi0, c));
}
BENCHMARK(BM_AngularPattern)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
