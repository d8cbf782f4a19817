#pragma once

// Vector kernels used by the Krylov iterations. Each kernel has a serial
// reference and an OpenMP version. The parallel reductions sum fixed-size
// blocks and combine the block sums in order, so their results do not depend
// on the thread count.

#include <cstddef>
#include <span>

#include "kreach/sparse_matrix.hpp"

namespace kreach::kernels {

inline constexpr std::size_t kReductionBlock = 4096;

// Serial references.
void spmv_serial(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
double dot_serial(std::span<const double> x, std::span<const double> y);
double norm2_serial(std::span<const double> x);
void axpy_serial(double alpha, std::span<const double> x, std::span<double> y);
void scale_serial(double alpha, std::span<double> x);

// OpenMP versions.
void spmv_parallel(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
double dot_parallel(std::span<const double> x, std::span<const double> y);
double norm2_parallel(std::span<const double> x);
void axpy_parallel(double alpha, std::span<const double> x, std::span<double> y);
void scale_parallel(double alpha, std::span<double> x);

// Library entry points (parallel versions).
inline void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  spmv_parallel(a, x, y);
}
inline double dot(std::span<const double> x, std::span<const double> y) {
  return dot_parallel(x, y);
}
inline double norm2(std::span<const double> x) { return norm2_parallel(x); }
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  axpy_parallel(alpha, x, y);
}
inline void scale(double alpha, std::span<double> x) { scale_parallel(alpha, x); }

/// Sets the thread budget used by the parallel kernels (0 = runtime default).
void set_thread_budget(int threads);
int thread_budget();

}  // namespace kreach::kernels
