// Serial vs OpenMP kernels and a full solve on the default instance size.

#include <benchmark/benchmark.h>

#include "hvsparse/core.hpp"
#include "hvsparse/kernels.hpp"
#include "hvsparse/operators.hpp"
#include "hvsparse/solvers.hpp"

using namespace hvsparse;

namespace {

DenseMatrix random_matrix(std::size_t m, std::size_t n) {
  Rng rng(RngSeed{m * 31 + n});
  DenseMatrix A(m, n);
  for (double& v : A.entries()) v = rng.normal();
  return A;
}

template <kernels::Backend B>
void BM_gemv(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto A = random_matrix(n / 2, n);
  const auto x = Rng(RngSeed{1}).normal_vector(n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::multiply(B, A, x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(A.rows() * A.cols()));
}

template <kernels::Backend B>
void BM_gemv_t(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto A = random_matrix(n / 2, n);
  const auto r = Rng(RngSeed{2}).normal_vector(n / 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::multiply_transposed(B, A, r));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(A.rows() * A.cols()));
}

template <kernels::Backend B>
void BM_hv_solve(benchmark::State& state) {
  auto inst = gaussian_instance(200, 80, 16, 0.05, RngSeed{1});
  PowerCsOperator op(inst.A, 2, 3, B);
  auto data = add_noise_db(op.apply(inst.x_true), 30.0, derive_seed(RngSeed{1}, 1));
  SolverConfig cfg;
  cfg.max_iters = 500;
  cfg.record_trace = false;
  cfg.compat_alpha_mode = true;
  for (auto _ : state) benchmark::DoNotOptimize(hv_solve(op, data.y_delta, 5.1e-5, 1.0, cfg));
}

}  // namespace

BENCHMARK(BM_gemv<kernels::Backend::serial>)->RangeMultiplier(4)->Range(256, 8192);
BENCHMARK(BM_gemv<kernels::Backend::openmp>)->RangeMultiplier(4)->Range(256, 8192);
BENCHMARK(BM_gemv_t<kernels::Backend::serial>)->RangeMultiplier(4)->Range(256, 8192);
BENCHMARK(BM_gemv_t<kernels::Backend::openmp>)->RangeMultiplier(4)->Range(256, 8192);
BENCHMARK(BM_hv_solve<kernels::Backend::serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_hv_solve<kernels::Backend::openmp>)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
