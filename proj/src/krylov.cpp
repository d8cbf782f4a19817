#include "kreach/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kreach/errors.hpp"
#include "kreach/kernels.hpp"

namespace kreach {
namespace {

std::size_t next_checkpoint(std::size_t k) { return (11 * k + 9) / 10; }

std::size_t resolve_k_max(const SparseMatrix& a, const KrylovOptions& options) {
  const auto n = static_cast<std::size_t>(a.rows());
  return options.k_max == 0 ? n : std::min(options.k_max, n);
}

void check_inputs(const SparseMatrix& a, std::span<const double> v, const char* who) {
  if (!a.square()) throw InputError(std::string(who) + ": matrix is not square");
  if (static_cast<std::size_t>(a.rows()) != v.size())
    throw InputError(std::string(who) + ": start vector has length " + std::to_string(v.size()) +
                     ", expected " + std::to_string(a.rows()));
  if (a.rows() == 0) throw InputError(std::string(who) + ": empty matrix");
}

void check_symmetric(const SparseMatrix& a, const KrylovOptions& options, const char* who) {
  if (options.check_symmetry && !is_symmetric(a, options.symmetry_tol))
    throw InputError(std::string(who) + ": Lanczos requires a symmetric matrix");
}

// Receives each normalized Krylov vector as it is produced.
class BasisSink {
 public:
  BasisSink(KrylovDecomposition& dec, const Eigen::MatrixXd* proj) : dec_(dec), proj_(proj) {
    dec_.kind = proj ? BasisKind::Projected : BasisKind::Full;
    dec_.basis_rows = proj ? static_cast<std::size_t>(proj->rows()) : dec_.n;
  }

  void push(std::span<const double> q) {
    if (!proj_) {
      dec_.basis.emplace_back(q.begin(), q.end());
      return;
    }
    Vector column(dec_.basis_rows);
    Eigen::Map<Eigen::VectorXd>(column.data(), static_cast<Eigen::Index>(column.size()))
        .noalias() = *proj_ * Eigen::Map<const Eigen::VectorXd>(q.data(), q.size());
    dec_.basis.push_back(std::move(column));
  }

 private:
  KrylovDecomposition& dec_;
  const Eigen::MatrixXd* proj_;
};

// Modified Gram-Schmidt Arnoldi. H is kept column by column: column j holds
// h_{0,j} .. h_{j+1,j}.
class ArnoldiProcess {
 public:
  ArnoldiProcess(const SparseMatrix& a, std::span<const double> v, double breakdown_tol,
                 KrylovDecomposition& dec)
      : a_(a), tol_(breakdown_tol), dec_(dec), sink_(dec, nullptr), w_(v.size()) {
    start(v, dec_, sink_);
  }

  std::size_t dim() const { return dec_.basis.size(); }

  // Returns true on breakdown.
  bool step() {
    const std::size_t j = dim() - 1;
    kernels::spmv(a_, dec_.basis[j], w_);
    const double a_norm = kernels::norm2(w_);
    Vector column(j + 2, 0.0);
    for (std::size_t i = 0; i <= j; ++i) {
      column[i] = kernels::dot(dec_.basis[i], w_);
      kernels::axpy(-column[i], dec_.basis[i], w_);
    }
    const double h = kernels::norm2(w_);
    const bool breakdown = h <= tol_ * a_norm || j + 1 == dec_.n;
    column[j + 1] = breakdown ? 0.0 : h;
    h_columns_.push_back(std::move(column));
    if (breakdown) return true;
    kernels::scale(1.0 / h, w_);
    sink_.push(w_);
    return false;
  }

  double coupling() const { return h_columns_.back().back(); }

  DenseMatrix hessenberg(std::size_t d) const {
    DenseMatrix h = DenseMatrix::Zero(d, d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < std::min(j + 2, d); ++i) h(i, j) = h_columns_[j][i];
    return h;
  }

  static void start(std::span<const double> v, KrylovDecomposition& dec, BasisSink& sink) {
    dec.v_norm = kernels::norm2(v);
    Vector q(v.begin(), v.end());
    if (dec.v_norm > 0.0) kernels::scale(1.0 / dec.v_norm, q);
    sink.push(q);
  }

 private:
  const SparseMatrix& a_;
  double tol_;
  KrylovDecomposition& dec_;
  BasisSink sink_;
  Vector w_;
  std::vector<Vector, memory::TrackingAllocator<Vector>> h_columns_;
};

// Lanczos without reorthogonalization. Only three n-vectors are live; the
// basis (full or projected) goes to the sink.
class LanczosProcess {
 public:
  LanczosProcess(const SparseMatrix& a, std::span<const double> v, double breakdown_tol,
                 KrylovDecomposition& dec, const Eigen::MatrixXd* proj)
      : a_(a), tol_(breakdown_tol), dec_(dec), sink_(dec, proj),
        q_prev_(v.size(), 0.0), q_(v.begin(), v.end()), w_(v.size()) {
    dec_.v_norm = kernels::norm2(v);
    if (dec_.v_norm > 0.0) kernels::scale(1.0 / dec_.v_norm, q_);
    sink_.push(q_);
  }

  std::size_t dim() const { return dec_.basis.size(); }

  bool step() {
    kernels::spmv(a_, q_, w_);
    const double a_norm = kernels::norm2(w_);
    if (!beta_.empty()) kernels::axpy(-beta_.back(), q_prev_, w_);
    const double alpha = kernels::dot(q_, w_);
    kernels::axpy(-alpha, q_, w_);
    const double beta = kernels::norm2(w_);
    alpha_.push_back(alpha);
    const bool breakdown = beta <= tol_ * a_norm || alpha_.size() == dec_.n;
    if (breakdown) {
      coupling_ = 0.0;
      return true;
    }
    beta_.push_back(beta);
    coupling_ = beta;
    q_prev_.swap(q_);
    q_.swap(w_);
    kernels::scale(1.0 / beta, q_);
    sink_.push(q_);
    return false;
  }

  double coupling() const { return coupling_; }

  // Leading d x d block; the sub-diagonal entry d (if any) is the coupling.
  Tridiagonal tridiagonal(std::size_t d) const {
    Tridiagonal t;
    t.diag.assign(alpha_.begin(), alpha_.begin() + static_cast<std::ptrdiff_t>(d));
    t.off.assign(beta_.begin(), beta_.begin() + static_cast<std::ptrdiff_t>(d - 1));
    return t;
  }

 private:
  const SparseMatrix& a_;
  double tol_;
  KrylovDecomposition& dec_;
  BasisSink sink_;
  Vector q_prev_;
  Vector q_;
  Vector w_;
  Vector alpha_;
  Vector beta_;
  double coupling_ = 0.0;
};

// Drops basis columns beyond the final dimension d (the process may have
// produced v_{d+1} before the check that accepted d).
void trim_basis(KrylovDecomposition& dec, std::size_t d) {
  while (dec.basis.size() > d) dec.basis.pop_back();
  dec.k = d;
}

template <typename Process, typename Bound, typename Finish>
void run_adaptive(Process& process, KrylovDecomposition& dec, std::size_t k_max, double epsilon,
                  const KrylovOptions& options, Bound bound, Finish finish, const char* who) {
  std::size_t next = std::min(std::max<std::size_t>(options.initial_k, 1), k_max);
  double best = std::numeric_limits<double>::infinity();
  if (dec.v_norm == 0.0) {
    dec.exact_breakdown = true;
    dec.error_bound = 0.0;
    dec.trace.push_back({1, 0.0});
    finish(1, 0.0);
    trim_basis(dec, 1);
    return;
  }
  while (true) {
    const bool breakdown = process.step();
    const std::size_t d = breakdown ? process.dim() : process.dim() - 1;
    if (breakdown) {
      dec.exact_breakdown = true;
      dec.error_bound = 0.0;
      dec.trace.push_back({d, 0.0});
      finish(d, 0.0);
      trim_basis(dec, d);
      return;
    }
    if (d < next) continue;
    const double b = bound(d);
    dec.trace.push_back({d, b});
    best = std::min(best, b);
    if (b < epsilon) {
      dec.error_bound = b;
      finish(d, process.coupling());
      trim_basis(dec, d);
      return;
    }
    if (next >= k_max)
      throw KrylovLimitError(std::string(who) + ": reached k_max = " + std::to_string(k_max) +
                                 " with error bound " + std::to_string(best),
                             d, best);
    next = std::min(next_checkpoint(next), k_max);
  }
}

KrylovDecomposition make_decomposition(const SparseMatrix& a) {
  KrylovDecomposition dec;
  dec.n = static_cast<std::size_t>(a.rows());
  return dec;
}

KrylovDecomposition lanczos_adaptive_impl(const SparseMatrix& a, std::span<const double> v,
                                          const Eigen::MatrixXd* proj, double tau, double epsilon,
                                          double nu, const KrylovOptions& options,
                                          const char* who) {
  check_inputs(a, v, who);
  check_symmetric(a, options, who);
  if (proj && proj->cols() != a.rows())
    throw InputError(std::string(who) + ": projection has " + std::to_string(proj->cols()) +
                     " columns, expected " + std::to_string(a.rows()));
  KrylovDecomposition dec = make_decomposition(a);
  dec.is_tridiagonal = true;
  LanczosProcess process(a, v, options.breakdown_tol, dec, proj);
  const auto bound = [&](std::size_t d) {
    return aposteriori_error_tridiagonal(nu, tau, process.tridiagonal(d), process.coupling(),
                                         options.quadrature_rel_tol, options.quadrature_panels);
  };
  const auto finish = [&](std::size_t d, double coupling) {
    if (dec.v_norm == 0.0) {
      dec.tridiagonal.diag.assign(1, 0.0);
      return;
    }
    dec.tridiagonal = process.tridiagonal(d);
    dec.residual_coupling = coupling;
  };
  run_adaptive(process, dec, resolve_k_max(a, options), epsilon, options, bound, finish, who);
  return dec;
}

}  // namespace

DenseMatrix KrylovDecomposition::hessenberg() const {
  if (!is_tridiagonal) return h_matrix;
  const auto d = static_cast<Eigen::Index>(tridiagonal.size());
  DenseMatrix h = DenseMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    h(i, i) = tridiagonal.diag[i];
    if (i + 1 < d) h(i, i + 1) = h(i + 1, i) = tridiagonal.off[i];
  }
  return h;
}

DenseMatrix KrylovDecomposition::basis_matrix() const {
  DenseMatrix m(basis_rows, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < basis_rows; ++i) m(i, j) = basis[j][i];
  return m;
}

KrylovDecomposition arnoldi_fixed(const SparseMatrix& a, std::span<const double> v, std::size_t k,
                                  const KrylovOptions& options) {
  check_inputs(a, v, "arnoldi");
  if (k == 0) throw InputError("arnoldi: k must be positive");
  if (kernels::norm2(v) == 0.0) throw InputError("arnoldi: zero start vector");
  KrylovDecomposition dec = make_decomposition(a);
  ArnoldiProcess process(a, v, options.breakdown_tol, dec);
  std::size_t d = 1;
  bool breakdown = dec.v_norm == 0.0;
  while (!breakdown) {
    breakdown = process.step();
    if (breakdown || d == k) break;
    ++d;
  }
  dec.exact_breakdown = breakdown;
  if (dec.v_norm == 0.0) {
    dec.h_matrix = DenseMatrix::Zero(1, 1);
  } else {
    dec.h_matrix = process.hessenberg(d);
    dec.residual_coupling = breakdown ? 0.0 : process.coupling();
  }
  trim_basis(dec, d);
  return dec;
}

KrylovDecomposition lanczos_fixed(const SparseMatrix& a, std::span<const double> v, std::size_t k,
                                  const KrylovOptions& options) {
  check_inputs(a, v, "lanczos");
  check_symmetric(a, options, "lanczos");
  if (k == 0) throw InputError("lanczos: k must be positive");
  if (kernels::norm2(v) == 0.0) throw InputError("lanczos: zero start vector");
  KrylovDecomposition dec = make_decomposition(a);
  dec.is_tridiagonal = true;
  LanczosProcess process(a, v, options.breakdown_tol, dec, nullptr);
  std::size_t d = 1;
  bool breakdown = dec.v_norm == 0.0;
  while (!breakdown) {
    breakdown = process.step();
    if (breakdown || d == k) break;
    ++d;
  }
  dec.exact_breakdown = breakdown;
  if (dec.v_norm == 0.0) {
    dec.tridiagonal.diag.assign(1, 0.0);
  } else {
    dec.tridiagonal = process.tridiagonal(d);
    dec.residual_coupling = breakdown ? 0.0 : process.coupling();
  }
  trim_basis(dec, d);
  return dec;
}

KrylovDecomposition arnoldi_adaptive(const SparseMatrix& a, std::span<const double> v, double tau,
                                     double epsilon, double nu, const KrylovOptions& options) {
  check_inputs(a, v, "arnoldi");
  KrylovDecomposition dec = make_decomposition(a);
  ArnoldiProcess process(a, v, options.breakdown_tol, dec);
  const auto bound = [&](std::size_t d) {
    ErrorBoundInputs in;
    in.nu = nu;
    in.tau = tau;
    in.h_matrix = process.hessenberg(d);
    in.residual_coupling = process.coupling();
    in.quadrature_rel_tol = options.quadrature_rel_tol;
    in.quadrature_panels = options.quadrature_panels;
    return aposteriori_error(in);
  };
  const auto finish = [&](std::size_t d, double coupling) {
    dec.h_matrix = dec.v_norm == 0.0 ? DenseMatrix::Zero(1, 1) : process.hessenberg(d);
    dec.residual_coupling = coupling;
  };
  run_adaptive(process, dec, resolve_k_max(a, options), epsilon, options, bound, finish,
               "arnoldi");
  return dec;
}

KrylovDecomposition lanczos_adaptive(const SparseMatrix& a, std::span<const double> v, double tau,
                                     double epsilon, double nu, const KrylovOptions& options) {
  return lanczos_adaptive_impl(a, v, nullptr, tau, epsilon, nu, options, "lanczos");
}

KrylovDecomposition lanczos_projected_adaptive(const SparseMatrix& a, std::span<const double> v,
                                               const Eigen::MatrixXd& proj, double tau,
                                               double epsilon, double nu,
                                               const KrylovOptions& options) {
  return lanczos_adaptive_impl(a, v, &proj, tau, epsilon, nu, options, "lanczos");
}

Eigen::VectorXd krylov_eval(const KrylovDecomposition& dec, double t) {
  return krylov_eval_grid(dec, t, 2).col(1);
}

Eigen::MatrixXd krylov_eval_grid(const KrylovDecomposition& dec, double dt, std::size_t count) {
  const auto rows = static_cast<Eigen::Index>(dec.basis_rows);
  const auto cols = static_cast<Eigen::Index>(count);
  const std::size_t k = dec.basis.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols);
  if (count == 0 || k == 0 || dec.v_norm == 0.0) return out;

  if (dec.is_tridiagonal && dec.kind == BasisKind::Projected) {
    // Carry the basis rows and e_1^T through the eigen-decomposition of T:
    // P e^{Tt} e_1 = sum_j (P Q)_{:,j} e^{t lambda_j} Q_{1,j}.
    Vector lambda;
    Vector tracked((dec.basis_rows + 1) * k, 0.0);
    for (std::size_t r = 0; r < dec.basis_rows; ++r)
      for (std::size_t j = 0; j < k; ++j) tracked[r * k + j] = dec.basis[j][r];
    tracked[dec.basis_rows * k] = 1.0;
    tridiagonal_eigen(dec.tridiagonal, lambda, tracked, dec.basis_rows + 1);
    const double* q1 = tracked.data() + dec.basis_rows * k;
    Vector weight(k);
    for (std::size_t c = 0; c < count; ++c) {
      const double t = dt * static_cast<double>(c);
      for (std::size_t j = 0; j < k; ++j) weight[j] = dec.v_norm * q1[j] * std::exp(t * lambda[j]);
      for (std::size_t r = 0; r < dec.basis_rows; ++r) {
        double sum = 0.0;
        const double* row = tracked.data() + r * k;
        for (std::size_t j = 0; j < k; ++j) sum += row[j] * weight[j];
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sum;
      }
    }
    return out;
  }

  const DenseMatrix coeffs = dec.v_norm * expm_action_column_grid(dec.hessenberg(), dt, count);
  for (std::size_t j = 0; j < k; ++j) {
    const Eigen::Map<const Eigen::VectorXd> column(dec.basis[j].data(), rows);
    out.noalias() += column * coeffs.row(static_cast<Eigen::Index>(j));
  }
  return out;
}

}  // namespace kreach
