// Serial reference kernels against their OpenMP versions on heat matrices.

#include <map>
#include <vector>

#include <benchmark/benchmark.h>

#include "kreach/benchgen.hpp"
#include "kreach/kernels.hpp"

using namespace kreach;

namespace {

const SparseMatrix& heat_matrix(std::size_t m) {
  static std::map<std::size_t, SparseMatrix> cache;
  auto it = cache.find(m);
  if (it == cache.end()) {
    HeatParams params;
    params.m = m;
    it = cache.emplace(m, gen_heat3d(params).a_matrix).first;
  }
  return it->second;
}

template <void (*Spmv)(const SparseMatrix&, std::span<const double>, std::span<double>)>
void BM_spmv(benchmark::State& state) {
  const SparseMatrix& a = heat_matrix(static_cast<std::size_t>(state.range(0)));
  std::vector<double> x(static_cast<std::size_t>(a.cols()), 1.0);
  std::vector<double> y(static_cast<std::size_t>(a.rows()));
  for (auto _ : state) {
    Spmv(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.nnz()));
}

template <double (*Dot)(std::span<const double>, std::span<const double>)>
void BM_dot(benchmark::State& state) {
  std::vector<double> x(static_cast<std::size_t>(state.range(0)), 0.5);
  std::vector<double> y(x.size(), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(Dot(x, y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <void (*Axpy)(double, std::span<const double>, std::span<double>)>
void BM_axpy(benchmark::State& state) {
  std::vector<double> x(static_cast<std::size_t>(state.range(0)), 0.5);
  std::vector<double> y(x.size(), 2.0);
  for (auto _ : state) {
    Axpy(1e-9, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_spmv<kernels::spmv_serial>)->Name("spmv/serial")->Arg(20)->Arg(50)->Arg(100);
BENCHMARK(BM_spmv<kernels::spmv_parallel>)->Name("spmv/parallel")->Arg(20)->Arg(50)->Arg(100)->UseRealTime();
BENCHMARK(BM_dot<kernels::dot_serial>)->Name("dot/serial")->Arg(1 << 16)->Arg(1 << 22);
BENCHMARK(BM_dot<kernels::dot_parallel>)->Name("dot/parallel")->Arg(1 << 16)->Arg(1 << 22)->UseRealTime();
BENCHMARK(BM_axpy<kernels::axpy_serial>)->Name("axpy/serial")->Arg(1 << 16)->Arg(1 << 22);
BENCHMARK(BM_axpy<kernels::axpy_parallel>)->Name("axpy/parallel")->Arg(1 << 16)->Arg(1 << 22)->UseRealTime();

BENCHMARK_MAIN();
