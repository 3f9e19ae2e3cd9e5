#include <benchmark/benchmark.h>

#include <random>

#include "convdistill/convdistill.hpp"

namespace {

using namespace convdistill;

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (auto& v : m.values()) v = Complex(d(rng), d(rng));
  return m;
}

void BM_DftDirect(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_matrix(n, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(dft_2d_direct(x, Normalization::Unnormalized));
}
BENCHMARK(BM_DftDirect)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_DftTwoStage(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_matrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(dft_2d_two_stage(x, Normalization::Unnormalized));
}
BENCHMARK(BM_DftTwoStage)->RangeMultiplier(2)->Range(16, 512)->Unit(benchmark::kMillisecond);

// args: size, workers
void BM_DftParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_matrix(n, n, 3);
  WorkerPool pool(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(parallel_dft_2d(x, Normalization::Unitary, pool));
}
BENCHMARK(BM_DftParallel)
    ->ArgsProduct({{128, 512}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_BlockMatmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, n, 4);
  const auto b = random_matrix(n, n, 5);
  WorkerPool pool(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(block_matmul(a, b, BlockPartition{}, pool));
}
BENCHMARK(BM_BlockMatmul)->ArgsProduct({{256}, {1, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SolveKernel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_matrix(n, n, 6);
  const auto y = random_matrix(n, n, 7);
  WorkerPool pool(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_kernel(x, y, Regularization::automatic(), pool));
}
BENCHMARK(BM_SolveKernel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
