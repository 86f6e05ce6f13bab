// Timing comparison of the parallel kernels against the serial reference
// implementations. Run with --benchmark_filter=... to narrow it down.

#include <benchmark/benchmark.h>

#include "tvn/reference.hpp"
#include "tvn/rng.hpp"
#include "tvn/tensor.hpp"

namespace {

tvn::DenseTensor random_tensor(std::vector<int> shape, std::uint64_t seed) {
  std::size_t n = 1;
  for (int e : shape) n *= static_cast<std::size_t>(e);
  tvn::Rng rng(seed);
  std::vector<double> data(n);
  for (double& v : data) v = rng.gaussian();
  return tvn::DenseTensor(std::move(shape), std::move(data));
}

tvn::Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  tvn::Rng rng(seed);
  std::vector<double> data(static_cast<std::size_t>(rows) * cols);
  for (double& v : data) v = rng.gaussian();
  return tvn::Matrix(rows, cols, std::move(data));
}

void BM_matricize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = random_tensor({n, n, n}, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tvn::matricize(x, 2));
  }
}

void BM_matricize_ref(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = random_tensor({n, n, n}, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tvn::ref::matricize(x, 2));
  }
}

void BM_mode_multiply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = random_tensor({n, n, n}, 2);
  const auto u = random_matrix(n, n, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tvn::mode_multiply(x, 2, u));
  }
}

void BM_mode_multiply_ref(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = random_tensor({n, n, n}, 2);
  const auto u = random_matrix(n, n, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tvn::ref::mode_multiply(x, 2, u));
  }
}

void BM_inner_product(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = random_tensor({n, n, n}, 4);
  const auto y = random_tensor({n, n, n}, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tvn::inner_product(x, y));
  }
}

void BM_inner_product_ref(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = random_tensor({n, n, n}, 4);
  const auto y = random_tensor({n, n, n}, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tvn::ref::inner_product(x, y));
  }
}

void BM_kronecker(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = random_matrix(n, n, 6);
  const auto b = random_matrix(n, n, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tvn::kronecker(a, b));
  }
}

void BM_kronecker_ref(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = random_matrix(n, n, 6);
  const auto b = random_matrix(n, n, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tvn::ref::kronecker(a, b));
  }
}

}  // namespace

BENCHMARK(BM_matricize)->Arg(16)->Arg(48)->Arg(96);
BENCHMARK(BM_matricize_ref)->Arg(16)->Arg(48)->Arg(96);
BENCHMARK(BM_mode_multiply)->Arg(16)->Arg(48)->Arg(96);
BENCHMARK(BM_mode_multiply_ref)->Arg(16)->Arg(48)->Arg(96);
BENCHMARK(BM_inner_product)->Arg(16)->Arg(48)->Arg(96);
BENCHMARK(BM_inner_product_ref)->Arg(16)->Arg(48)->Arg(96);
BENCHMARK(BM_kronecker)->Arg(32)->Arg(64);
BENCHMARK(BM_kronecker_ref)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
