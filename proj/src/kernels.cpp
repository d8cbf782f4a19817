#include "kreach/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <omp.h>

#include "kreach/errors.hpp"

namespace kreach::kernels {
namespace {

// Below this length the OpenMP regions are skipped; results are identical
// either way because the block decomposition does not change.
constexpr std::size_t kParallelThreshold = 1 << 15;

int g_threads = 0;

int active_threads() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

void check_spmv_dims(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (static_cast<Index>(x.size()) != a.cols() || static_cast<Index>(y.size()) != a.rows()) {
    throw InputError("spmv: dimension mismatch");
  }
}

}  // namespace

void set_thread_budget(int threads) { g_threads = threads < 0 ? 0 : threads; }
int thread_budget() { return active_threads(); }

void spmv_serial(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  check_spmv_dims(a, x, y);
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (Index i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    for (Index p = offsets[i]; p < offsets[i + 1]; ++p) sum += vals[p] * x[cols[p]];
    y[i] = sum;
  }
}

void spmv_parallel(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  check_spmv_dims(a, x, y);
  const Index* offsets = a.row_offsets().data();
  const Index* cols = a.col_indices().data();
  const double* vals = a.values().data();
  const Index rows = a.rows();
  const bool go_parallel = static_cast<std::size_t>(a.nnz()) >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (go_parallel) num_threads(active_threads())
  for (Index i = 0; i < rows; ++i) {
    double sum = 0.0;
    for (Index p = offsets[i]; p < offsets[i + 1]; ++p) sum += vals[p] * x[cols[p]];
    y[i] = sum;
  }
}

double dot_serial(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("dot: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

double dot_parallel(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("dot: length mismatch");
  const std::size_t n = x.size();
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  if (blocks <= 1) return dot_serial(x, y);
  std::vector<double> partial(blocks, 0.0);
  const bool go_parallel = n >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (go_parallel) num_threads(active_threads())
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sum += x[i] * y[i];
    partial[b] = sum;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double norm2_serial(std::span<const double> x) { return std::sqrt(dot_serial(x, x)); }
double norm2_parallel(std::span<const double> x) { return std::sqrt(dot_parallel(x, x)); }

void axpy_serial(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw InputError("axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void axpy_parallel(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw InputError("axpy: length mismatch");
  const std::size_t n = x.size();
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold) num_threads(active_threads())
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_serial(double alpha, std::span<double> x) {
  for (double& v : x) v *= alpha;
}

void scale_parallel(double alpha, std::span<double> x) {
  const std::size_t n = x.size();
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold) num_threads(active_threads())
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

}  // namespace kreach::kernels
