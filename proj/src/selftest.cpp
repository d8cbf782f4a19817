#include "kreach/selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "kreach/benchgen.hpp"
#include "kreach/expm.hpp"
#include "kreach/krylov.hpp"
#include "kreach/lp.hpp"
#include "kreach/verifier.hpp"

namespace kreach {
namespace {

using Rng = std::mt19937_64;

Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> dist;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
  return m;
}

// Symmetric negative definite with spectrum in [-scale, -0.1 scale].
Eigen::MatrixXd random_stable_symmetric(Rng& rng, Eigen::Index n, double scale) {
  const Eigen::MatrixXd q = random_matrix(rng, n, n).householderQr().householderQ();
  std::uniform_real_distribution<double> dist(0.1 * scale, scale);
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = -dist(rng);
  return q * d.asDiagonal() * q.transpose();
}

bool check_expm_inverse(Rng& rng) {
  const Eigen::MatrixXd m = random_matrix(rng, 6, 6);
  return (expm(m) * expm(-m) - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-10;
}

bool check_krylov_relation(Rng& rng) {
  const Eigen::MatrixXd a = random_matrix(rng, 50, 50);
  const Eigen::VectorXd v = random_matrix(rng, 50, 1);
  const SparseMatrix sa = SparseMatrix::from_dense(a);
  const KrylovDecomposition dec = arnoldi_fixed(sa, as_span(v), 10);
  const Eigen::MatrixXd vk = dec.basis_matrix();
  // A V_k - V_k H_k must be rank one along e_k with norm h_{k+1,k}.
  const Eigen::MatrixXd r = a * vk - vk * dec.hessenberg();
  return r.leftCols(dec.k - 1).norm() < 1e-10 * (1 + a.norm()) &&
         std::abs(r.col(dec.k - 1).norm() - dec.residual_coupling) < 1e-10 * (1 + a.norm());
}

bool check_bound_soundness(Rng& rng) {
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd a = random_stable_symmetric(rng, 30, 5.0);
    const Eigen::VectorXd v = random_matrix(rng, 30, 1).normalized();
    const double tau = 2.0;
    const SparseMatrix b = SparseMatrix::from_dense(-a);
    const double nu = log_norm_of_negated(SparseMatrix::from_dense(a));
    const std::size_t k = 4 + static_cast<std::size_t>(trial);
    const KrylovDecomposition dec = lanczos_fixed(b, as_span(v), k);
    const double bound = aposteriori_error_tridiagonal(nu, tau, dec.tridiagonal,
                                                       dec.residual_coupling);
    const Eigen::VectorXd exact = expm(a * tau) * v;
    if ((krylov_eval(dec, -tau) - exact).norm() > bound) return false;
  }
  return true;
}

bool check_projected_equivalence(Rng& rng) {
  const Eigen::MatrixXd a = random_stable_symmetric(rng, 40, 3.0);
  const Eigen::VectorXd v = random_matrix(rng, 40, 1);
  const Eigen::MatrixXd proj = random_matrix(rng, 2, 40);
  const SparseMatrix b = SparseMatrix::from_dense(-a);
  const KrylovDecomposition full = lanczos_adaptive(b, as_span(v), 1.0, 1e-8, 0.0);
  const KrylovDecomposition projected = lanczos_projected_adaptive(b, as_span(v), proj, 1.0, 1e-8, 0.0);
  return full.k == projected.k && full.tridiagonal.diag == projected.tridiagonal.diag &&
         full.tridiagonal.off == projected.tridiagonal.off &&
         (proj * full.basis_matrix() - projected.basis_matrix()).norm() < 1e-12;
}

bool check_lp_infeasible(Rng&) {
  // 0 <= z <= 1, y = z, y <= -1.
  LinearConstraintSet init = box_constraints(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1));
  LinearConstraintSet unsafe;
  unsafe.matrix.resize(0, 1);
  unsafe.add_row(Eigen::RowVectorXd::Ones(1), ConstraintKind::LessEqual, -1.0);
  return solve_feasibility(build_step_lp(Eigen::MatrixXd::Ones(1, 1), init, unsafe)).status ==
         LpStatus::Infeasible;
}

bool check_apriori(Rng&) {
  return std::abs(apriori_error_log10(32771611.0, 1000000, 1.0) - 1.6182319e7) <= 1.0;
}

bool check_oscillator(Rng&) {
  const VerificationProblem p = gen_oscillator();
  const Verdict v = verify(p, Strategy::DenseExpm);
  return v.status == VerdictStatus::Unsafe && v.step == 3 &&
         std::abs(v.witness_z0[0] - (4.0 - 2.5 * std::sqrt(2.0)) / std::sqrt(0.5)) < 1e-4 &&
         v.validation_rel_error && *v.validation_rel_error <= 1e-9;
}

bool check_strategy_agreement(Rng&) {
  const VerificationProblem p = gen_oscillator();
  const BasisSequence ref = compute_basis_sequence(p, Strategy::DenseExpm);
  for (Strategy s : {Strategy::Rk45, Strategy::KrylovArnoldi}) {
    for (Direction d : {Direction::Forward, Direction::Transpose}) {
      BasisOptions options;
      options.direction = d;
      const BasisSequence other = compute_basis_sequence(p, s, options);
      for (std::size_t j = 0; j < ref.steps(); ++j)
        if ((ref.entries[j] - other.entries[j]).cwiseAbs().maxCoeff() > 1e-6) return false;
    }
  }
  return true;
}

}  // namespace

int run_selftest(std::uint64_t seed, std::ostream& log) {
  struct Check {
    const char* name;
    std::function<bool(Rng&)> run;
  };
  const Check checks[] = {
      {"expm inverse", check_expm_inverse},
      {"krylov relation", check_krylov_relation},
      {"a posteriori bound soundness", check_bound_soundness},
      {"projected lanczos equivalence", check_projected_equivalence},
      {"lp infeasibility", check_lp_infeasible},
      {"a priori bound", check_apriori},
      {"oscillator verdict", check_oscillator},
      {"strategy agreement", check_strategy_agreement},
  };
  int failures = 0;
  Rng rng(seed);
  for (const Check& c : checks) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string error;
    try {
      ok = c.run(rng);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start).count();
    log << (ok ? "PASS " : "FAIL ") << c.name << " (" << ms << " ms)";
    if (!error.empty()) log << ": " << error;
    log << '\n';
    if (!ok) ++failures;
  }
  return failures;
}

}  // namespace kreach
