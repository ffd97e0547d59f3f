// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "anop/kernels.hpp"
#include "anop/linalg.hpp"

namespace {

using anop::Complex;
using anop::Matrix;

Matrix random_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

template <auto Kernel>
void bench_product(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n, 1), b = random_matrix(n, 2);
  Matrix c;
  for (auto _ : state) {
    Kernel(a, b, c);
    benchmark::DoNotOptimize(c);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}

template <auto Kernel>
void bench_norm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(a));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

void bench_eigen(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix h = random_matrix(n, 4).hermitian_part();
  for (auto _ : state) benchmark::DoNotOptimize(anop::hermitian_eigen(h));
}

}  // namespace

BENCHMARK(bench_product<anop::kernels::reference::gemm>)->Name("gemm/serial")->RangeMultiplier(2)->Range(32, 512);
BENCHMARK(bench_product<anop::kernels::gemm>)->Name("gemm/openmp")->RangeMultiplier(2)->Range(32, 512);
BENCHMARK(bench_product<anop::kernels::reference::gemm_adjoint_left>)
    ->Name("gemm_adjoint_left/serial")
    ->RangeMultiplier(2)
    ->Range(32, 512);
BENCHMARK(bench_product<anop::kernels::gemm_adjoint_left>)->Name("gemm_adjoint_left/openmp")->RangeMultiplier(2)->Range(32, 512);
BENCHMARK(bench_norm<anop::kernels::reference::frobenius>)->Name("frobenius/serial")->RangeMultiplier(4)->Range(64, 2048);
BENCHMARK(bench_norm<anop::kernels::frobenius>)->Name("frobenius/openmp")->RangeMultiplier(4)->Range(64, 2048);
BENCHMARK(bench_norm<anop::kernels::reference::off_diagonal_frobenius>)
    ->Name("off_diagonal_frobenius/serial")
    ->RangeMultiplier(4)
    ->Range(64, 2048);
BENCHMARK(bench_norm<anop::kernels::off_diagonal_frobenius>)
    ->Name("off_diagonal_frobenius/openmp")
    ->RangeMultiplier(4)
    ->Range(64, 2048);
BENCHMARK(bench_eigen)->Name("hermitian_eigen")->Arg(16)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
