#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "kreach/errors.hpp"
#include "kreach/kernels.hpp"
#include "kreach/krylov.hpp"

namespace kreach {
namespace {

double prefactor(double nu, double tau) { return std::exp(-std::min(nu, 0.0) * tau); }

SparseMatrix symmetric_part(const SparseMatrix& a) {
  std::vector<Triplet> entries;
  entries.reserve(2 * static_cast<std::size_t>(a.nnz()));
  for (const Triplet& t : a.triplets()) {
    entries.push_back({t.row, t.col, 0.5 * t.value});
    entries.push_back({t.col, t.row, 0.5 * t.value});
  }
  return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(entries));
}

}  // namespace

double aposteriori_error(const ErrorBoundInputs& in) {
  if (in.tau < 0.0) throw InputError("aposteriori_error: negative horizon");
  if (in.residual_coupling == 0.0 || in.tau == 0.0) return 0.0;
  QuadratureOptions options;
  options.rel_tol = in.quadrature_rel_tol;
  options.initial_panels = in.quadrature_panels;
  const double integral = integrate_abs_h(in.h_matrix, in.tau, options);
  return in.residual_coupling * prefactor(in.nu, in.tau) * integral *
         (1.0 + in.quadrature_rel_tol);
}

double aposteriori_error_tridiagonal(double nu, double tau, const Tridiagonal& t,
                                     double residual_coupling, double quadrature_rel_tol,
                                     std::size_t panels) {
  if (tau < 0.0) throw InputError("aposteriori_error: negative horizon");
  if (residual_coupling == 0.0 || tau == 0.0) return 0.0;
  const double integral = integrate_abs_h_tridiagonal(t, tau, quadrature_rel_tol, panels);
  return residual_coupling * prefactor(nu, tau) * integral * (1.0 + quadrature_rel_tol);
}

double apriori_error_log10(double norm_at, std::size_t k, double v_norm) {
  if (norm_at < 0.0 || k == 0) throw InputError("apriori_error: need norm >= 0 and k >= 1");
  if (norm_at == 0.0 || v_norm == 0.0) return -std::numeric_limits<double>::infinity();
  const double kd = static_cast<double>(k);
  return std::log10(v_norm) + kd * std::log10(norm_at) + norm_at / std::log(10.0) -
         std::lgamma(kd + 1.0) / std::log(10.0);
}

double gershgorin_lower_bound(const SparseMatrix& a) {
  if (!a.square()) throw InputError("gershgorin_lower_bound: matrix is not square");
  if (a.rows() == 0) return 0.0;
  const SparseMatrix s = symmetric_part(a);
  double lower = std::numeric_limits<double>::infinity();
  const auto offsets = s.row_offsets();
  const auto cols = s.col_indices();
  const auto vals = s.values();
  for (Index r = 0; r < s.rows(); ++r) {
    double diag = 0.0, radius = 0.0;
    for (Index p = offsets[r]; p < offsets[r + 1]; ++p) {
      if (cols[p] == r)
        diag = vals[p];
      else
        radius += std::abs(vals[p]);
    }
    lower = std::min(lower, diag - radius);
  }
  return lower;
}

double estimate_nu(const SparseMatrix& a, const NuOptions& options) {
  if (!a.square()) throw InputError("estimate_nu: matrix is not square");
  const auto n = static_cast<std::size_t>(a.rows());
  if (n == 0) throw InputError("estimate_nu: empty matrix");
  const std::size_t cap =
      options.max_iterations ? options.max_iterations
                             : static_cast<std::size_t>(10.0 * std::sqrt(double(n))) + 1000;
  const SparseMatrix s = symmetric_part(a);

  Vector q(n), q_prev(n, 0.0), w(n);
  std::mt19937_64 rng(0x6b72796cULL);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  for (double& x : q) x = dist(rng);
  kernels::scale(1.0 / kernels::norm2(q), q);

  Tridiagonal t;
  Vector lambda;
  Vector last_row;
  double beta = 0.0;

  // Smallest Ritz value of the current T and its residual estimate.
  const auto ritz = [&](double coupling, double& theta, double& residual) {
    const std::size_t k = t.size();
    last_row.assign(k, 0.0);
    last_row[k - 1] = 1.0;
    tridiagonal_eigen(t, lambda, last_row, 1);
    const auto it = std::min_element(lambda.begin(), lambda.end());
    theta = *it;
    residual = coupling * std::abs(last_row[static_cast<std::size_t>(it - lambda.begin())]);
  };

  for (std::size_t j = 1; j <= cap; ++j) {
    kernels::spmv(s, q, w);
    const double s_norm = kernels::norm2(w);
    if (j > 1) kernels::axpy(-beta, q_prev, w);
    const double alpha = kernels::dot(q, w);
    kernels::axpy(-alpha, q, w);
    t.diag.push_back(alpha);
    beta = kernels::norm2(w);
    const bool breakdown = beta <= 1e-12 * s_norm || j == n;
    if (breakdown || j % 10 == 0 || j == cap) {
      double theta = 0.0, residual = 0.0;
      ritz(breakdown ? 0.0 : beta, theta, residual);
      if (breakdown || residual <= options.tol) return theta - options.tol;
    }
    t.off.push_back(beta);
    q_prev.swap(q);
    q.swap(w);
    kernels::scale(1.0 / beta, q);
  }
  throw NumericalError("estimate_nu: no convergence within " + std::to_string(cap) +
                       " iterations");
}

}  // namespace kreach
