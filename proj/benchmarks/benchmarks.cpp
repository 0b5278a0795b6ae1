#include <benchmark/benchmark.h>

#include <numbers>

#include "vnd/certify.hpp"
#include "vnd/dilation.hpp"
#include "vnd/rng.hpp"

using namespace vnd;

namespace {

void BM_OperatorNorm(benchmark::State& state) {
  Rng rng(1);
  const Eigen::Index n = state.range(0);
  const ComplexMatrix m = rng.matrix(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(operator_norm(m));
}
BENCHMARK(BM_OperatorNorm)->Arg(8)->Arg(32)->Arg(128);

void BM_SupNormGrid(benchmark::State& state) {
  const MatrixPolynomial p = random_scalar_polynomial(3, 3, 7);
  SupNormOptions opts;
  opts.mesh = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sup_norm_torus(p, opts));
}
BENCHMARK(BM_SupNormGrid)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_FailureCertificateScan(benchmark::State& state) {
  const MatrixPolynomial p =
      failing_polynomial({std::numbers::pi / 4, std::numbers::pi / 4});
  SupNormOptions opts;
  opts.mesh = static_cast<int>(state.range(0));
  opts.target_gap = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(sup_norm_torus(p, opts));
}
BENCHMARK(BM_FailureCertificateScan)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_DilationChain(benchmark::State& state) {
  const CommutingTuple t = random_commuting_contractions(
      3, 3, 11, RandomScheme::kScalarPlusNilpotent);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(dilate_triple(t, n, n, 3));
}
BENCHMARK(BM_DilationChain)->Arg(12)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_NilpotentDilation(benchmark::State& state) {
  const CommutingTuple t = build_counterexample(
      {std::numbers::pi / 4, std::numbers::pi / 4});
  const NilpotentStructure st = decompose_nilpotents(CommutingTuple::make(
      {t.matrices[0], t.matrices[1], t.matrices[2]}));
  const int window = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(dilate_unit_nilpotent_triple(st, window));
}
BENCHMARK(BM_NilpotentDilation)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
