#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kreach/expm.hpp"
#include "kreach/sparse_matrix.hpp"
#include "kreach/tracking_allocator.hpp"
#include "kreach/tridiagonal.hpp"

namespace kreach {

using ColumnList = std::vector<Vector, memory::TrackingAllocator<Vector>>;

enum class BasisKind { Full, Projected };

struct KrylovOptions {
  /// Largest subspace dimension the adaptive iterations may reach; 0 means n.
  std::size_t k_max = 0;
  /// First a posteriori checkpoint.
  std::size_t initial_k = 4;
  /// h_{k+1,k} <= breakdown_tol * ||A v_k|| is treated as exact breakdown.
  double breakdown_tol = 1e-12;
  double quadrature_rel_tol = 1e-3;
  std::size_t quadrature_panels = 64;
  /// Lanczos entry points reject matrices that fail is_symmetric(A, symmetry_tol).
  bool check_symmetry = true;
  double symmetry_tol = 1e-12;
};

struct Checkpoint {
  std::size_t k;
  double bound;
};

/// Output of an Arnoldi or Lanczos run:
///   A V_k = V_k H_k + h_{k+1,k} v_{k+1} e_k^T,  v = v_norm * V_k e_1.
/// The basis is either V_k itself (n x k) or its projection P = proj * V_k.
struct KrylovDecomposition {
  std::size_t k = 0;
  std::size_t n = 0;
  bool is_tridiagonal = false;
  DenseMatrix h_matrix;     // Arnoldi: k x k upper Hessenberg
  Tridiagonal tridiagonal;  // Lanczos: diagonal and off-diagonal of H
  double residual_coupling = 0.0;
  BasisKind kind = BasisKind::Full;
  std::size_t basis_rows = 0;
  ColumnList basis;  // k columns, each basis_rows long
  double v_norm = 0.0;
  bool exact_breakdown = false;
  /// Last a posteriori bound (unit start vector); NaN for fixed-k runs.
  double error_bound = std::numeric_limits<double>::quiet_NaN();
  std::vector<Checkpoint> trace;

  /// Dense k x k H (materialized from the tridiagonal form for Lanczos).
  DenseMatrix hessenberg() const;
  /// basis_rows x k.
  DenseMatrix basis_matrix() const;
};

KrylovDecomposition arnoldi_fixed(const SparseMatrix& a, std::span<const double> v,
                                  std::size_t k, const KrylovOptions& options = {});

KrylovDecomposition lanczos_fixed(const SparseMatrix& a, std::span<const double> v,
                                  std::size_t k, const KrylovOptions& options = {});

/// Grows k from initial_k by ceil(1.1 k) until the a posteriori bound for
/// e^{-tau A} v (unit v) drops below epsilon or the iteration breaks down.
/// `nu` is the smallest eigenvalue of (A + A^T)/2. Throws KrylovLimitError
/// when k_max is reached first.
KrylovDecomposition arnoldi_adaptive(const SparseMatrix& a, std::span<const double> v,
                                     double tau, double epsilon, double nu,
                                     const KrylovOptions& options = {});

KrylovDecomposition lanczos_adaptive(const SparseMatrix& a, std::span<const double> v,
                                     double tau, double epsilon, double nu,
                                     const KrylovOptions& options = {});

/// Lanczos with error control that keeps only P = proj * V plus a window of
/// three n-vectors. H, k and the checkpoint trace are identical to
/// lanczos_adaptive on the same inputs.
KrylovDecomposition lanczos_projected_adaptive(const SparseMatrix& a, std::span<const double> v,
                                               const Eigen::MatrixXd& proj, double tau,
                                               double epsilon, double nu,
                                               const KrylovOptions& options = {});

/// v_norm * Basis * e^{H t} e_1. For a decomposition of B = -A this
/// approximates e^{-tB} v = e^{tA} v when called with -t.
Eigen::VectorXd krylov_eval(const KrylovDecomposition& dec, double t);

/// Columns krylov_eval(dec, j * dt) for j = 0..count-1.
Eigen::MatrixXd krylov_eval_grid(const KrylovDecomposition& dec, double dt, std::size_t count);

/// Inputs of the a posteriori bound
///   ||e^{-tau A} v - V_k e^{-tau H_k} e_1|| <= h_{k+1,k} e^{-min(nu,0) tau} int_0^tau |h(t)| dt,
/// h(t) the (k,1) entry of e^{-t H_k}, for unit v.
struct ErrorBoundInputs {
  double nu = 0.0;
  double tau = 0.0;
  DenseMatrix h_matrix;
  double residual_coupling = 0.0;
  double quadrature_rel_tol = 1e-3;
  std::size_t quadrature_panels = 64;
};

/// The computed integral is inflated by (1 + quadrature_rel_tol) so that the
/// quadrature error cannot make the bound optimistic.
double aposteriori_error(const ErrorBoundInputs& inputs);
double aposteriori_error_tridiagonal(double nu, double tau, const Tridiagonal& t,
                                     double residual_coupling, double quadrature_rel_tol = 1e-3,
                                     std::size_t panels = 64);

/// log10 of ||v|| ||At||^k e^{||At||} / k!; -infinity when ||At|| = 0.
double apriori_error_log10(double norm_at, std::size_t k, double v_norm);

struct NuOptions {
  double tol = 1e-6;
  /// 0 selects 10 sqrt(n) + 1000.
  std::size_t max_iterations = 0;
};

/// Smallest eigenvalue of (A + A^T)/2 via matrix-free Lanczos, minus `tol`.
/// Throws NumericalError when the iteration cap is hit before the Ritz
/// residual falls below tol.
double estimate_nu(const SparseMatrix& a, const NuOptions& options = {});

/// Gershgorin lower bound on the spectrum of (A + A^T)/2.
double gershgorin_lower_bound(const SparseMatrix& a);

}  // namespace kreach
