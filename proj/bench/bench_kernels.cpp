// Serial reference implementations against the OpenMP kernels.
#include "dks/evaluation.hpp"
#include "dks/matrix_kernel.hpp"
#include "dks/scoring.hpp"
#include "dks/variable_kernels.hpp"

#include <benchmark/benchmark.h>

using namespace dks;

namespace {

Dataset random_dataset(Index n, Index d) {
  Rng rng(1);
  Matrix x(n, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < n; ++i) x(i, j) = rng.normal();
  std::vector<std::string> names;
  for (Index j = 0; j < d; ++j) names.push_back("v" + std::to_string(j));
  return Dataset(std::move(names), std::move(x));
}

std::vector<EigenFeature> random_features(Index d, std::uint64_t seed) {
  Rng rng(seed);
  return eigen_features(canonical_eigen(random_spd(d, rng)));
}

void BM_CovarianceSerial(benchmark::State& state) {
  const auto ds = random_dataset(500, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::covariance_kernel(ds));
}

void BM_CovarianceParallel(benchmark::State& state) {
  const auto ds = random_dataset(500, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(covariance_kernel(ds));
}

void BM_MatrixKernelSerial(benchmark::State& state) {
  const auto a = random_features(state.range(0), 2), b = random_features(state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(reference::matrix_kernel(a, b));
}

void BM_MatrixKernelParallel(benchmark::State& state) {
  const auto a = random_features(state.range(0), 2), b = random_features(state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(matrix_kernel(a, b));
}

void BM_ScoreTargetsLiteral(benchmark::State& state) {
  const Index d = state.range(0);
  Rng rng(4);
  const Matrix k = random_spd(d, rng), kp = random_spd(d, rng);
  for (auto _ : state) {
    double total = 0.0;
    for (Index i = 0; i < d; ++i)
      total += reference::target_score_kernelized(k, kp, TargetSpec::same({i}), MatrixKernelKind::GaussianMatrixKernel);
    benchmark::DoNotOptimize(total);
  }
}

void BM_ScoreTargetsBatched(benchmark::State& state) {
  const Index d = state.range(0);
  Rng rng(4);
  const Matrix k = random_spd(d, rng), kp = random_spd(d, rng);
  std::vector<LabeledTarget> targets;
  for (Index i = 0; i < d; ++i) targets.push_back({std::to_string(i), TargetSpec::same({i})});
  for (auto _ : state) benchmark::DoNotOptimize(score_targets(k, kp, targets, MatrixKernelKind::GaussianMatrixKernel));
}

}  // namespace

BENCHMARK(BM_CovarianceSerial)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_CovarianceParallel)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_MatrixKernelSerial)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_MatrixKernelParallel)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(BM_ScoreTargetsLiteral)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreTargetsBatched)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
