// Serial reference vs OpenMP kernels, plus the end-to-end sample loop.

#include <benchmark/benchmark.h>

#include "specbound/decomp.hpp"
#include "specbound/experiment.hpp"
#include "specbound/matrix.hpp"
#include "specbound/parallel.hpp"
#include "specbound/rng.hpp"

namespace {

using namespace specbound;

Matrix random_square(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = cplx(rng.next_normal(), rng.next_normal());
  return m;
}

void BM_matmul_reference(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Matrix a = random_square(n, 1), b = random_square(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(detail::matmul_reference(a, b));
}
BENCHMARK(BM_matmul_reference)->Arg(64)->Arg(128)->Arg(256);

void BM_matmul_parallel(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  set_worker_count(static_cast<int>(state.range(1)));
  Matrix a = random_square(n, 1), b = random_square(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
}
BENCHMARK(BM_matmul_parallel)->Args({64, 1})->Args({128, 1})->Args({256, 1})->Args({256, 2})->Args({256, 4});

void BM_jacobi_svd(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Matrix a = random_square(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(svd(a));
}
BENCHMARK(BM_jacobi_svd)->Arg(32)->Arg(64)->Arg(128);

void BM_jacobi_eig_values(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Matrix a = random_square(n, 4);
  Matrix h = (a + a.adjoint()) * cplx(0.5, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigenvalues(h));
}
BENCHMARK(BM_jacobi_eig_values)->Arg(45)->Arg(90)->Arg(135);

void BM_experiment_samples(benchmark::State& state) {
  ExperimentConfig cfg = ExperimentConfig::example1();
  cfg.samples = static_cast<std::size_t>(state.range(0));
  cfg.k_max = 8;
  cfg.seed = 11;
  set_worker_count(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg));
}
BENCHMARK(BM_experiment_samples)->Args({4, 1})->Args({4, 2})->Args({4, 4});

}  // namespace

BENCHMARK_MAIN();
