#pragma once

#include <cstddef>
#include <span>

#include "kreach/tracking_allocator.hpp"

namespace kreach {

/// Symmetric tridiagonal T given by its diagonal and off-diagonal.
struct Tridiagonal {
  Vector diag;
  Vector off;  // size diag.size() - 1 (or 0)

  std::size_t size() const { return diag.size(); }
};

/// Eigen-decomposes T = Q diag(lambda) Q^T with implicit QL iterations.
/// Instead of the full Q, only `rows` (row_count x k, row-major) is carried
/// along: on return it holds rows * Q. Seeding it with e_1^T and e_k^T gives
/// the first and last rows of Q in O(k) memory. On return `eigenvalues` has
/// size k (unsorted).
void tridiagonal_eigen(const Tridiagonal& t, Vector& eigenvalues, std::span<double> rows,
                       std::size_t row_count);

/// Integral over [0, tau] of |(e^{-t T})_{k,1}|.
double integrate_abs_h_tridiagonal(const Tridiagonal& t, double tau, double rel_tol = 1e-3,
                                   std::size_t initial_panels = 64);

}  // namespace kreach
