#include <algorithm>
#include <exception>
#include <string>

#include <omp.h>

#include "kreach/errors.hpp"
#include "kreach/expm.hpp"
#include "kreach/kernels.hpp"
#include "kreach/verifier.hpp"

namespace kreach {
namespace {

constexpr double kSymmetryTol = 1e-12;

// One simulation: maps a start vector to the projected trajectory
// (rows of `proj`) at the s+1 grid points.
struct Job {
  Eigen::VectorXd start;
  Eigen::MatrixXd trajectory;  // proj rows x (s+1)
  SimulationRecord record;
  double scale = 0.0;  // |start| times the largest projection row norm
};

template <typename Body>
void run_jobs(std::vector<Job>& jobs, int threads, Body body) {
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
  if (count == 1) {
    body(jobs[0]);
    return;
  }
  std::exception_ptr failure;
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(team)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    try {
      body(jobs[j]);
    } catch (...) {
#pragma omp critical(kreach_basis_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

KrylovDecomposition project(KrylovDecomposition dec, const Eigen::MatrixXd& proj) {
  ColumnList projected;
  projected.reserve(dec.basis.size());
  for (const Vector& column : dec.basis) {
    Vector p(static_cast<std::size_t>(proj.rows()));
    Eigen::Map<Eigen::VectorXd>(p.data(), proj.rows()).noalias() =
        proj * Eigen::Map<const Eigen::VectorXd>(column.data(), proj.cols());
    projected.push_back(std::move(p));
  }
  dec.basis = std::move(projected);
  dec.basis_rows = static_cast<std::size_t>(proj.rows());
  dec.kind = BasisKind::Projected;
  return dec;
}

}  // namespace

const char* to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::DenseExpm: return "dense";
    case Strategy::Rk45: return "rk45";
    case Strategy::KrylovArnoldi: return "arnoldi";
    case Strategy::KrylovLanczos: return "lanczos";
  }
  return "?";
}

const char* to_string(Direction direction) {
  return direction == Direction::Forward ? "forward" : "transpose";
}

double log_norm_of_negated(const SparseMatrix& a, double tol) {
  const SparseMatrix negated = a.scaled(-1.0);
  const double lower = gershgorin_lower_bound(negated);
  if (lower >= 0.0) return lower;
  NuOptions options;
  options.tol = tol;
  return estimate_nu(negated, options);
}

BasisSequence compute_basis_sequence(const VerificationProblem& problem, Strategy strategy,
                                     const BasisOptions& options) {
  const Index n = problem.n();
  const Index i = problem.i();
  const Index o = problem.o();
  const std::size_t count = problem.n_steps + 1;
  if (!(options.epsilon > 0.0)) throw InputError("epsilon must be positive");

  BasisSequence seq;
  seq.strategy = strategy;
  seq.direction = options.direction.value_or(o < i ? Direction::Transpose : Direction::Forward);
  const bool forward = seq.direction == Direction::Forward;

  if (strategy == Strategy::KrylovLanczos && !is_symmetric(problem.a_matrix, kSymmetryTol))
    throw InputError("strategy lanczos requires a symmetric A matrix");
  if (strategy == Strategy::DenseExpm && static_cast<std::size_t>(n) > options.dense_cap)
    throw InputError("strategy dense is limited to n <= " + std::to_string(options.dense_cap) +
                     " (n = " + std::to_string(n) + ")");

  // Simulated system, start vectors and the projection applied to states.
  const SparseMatrix system = forward ? problem.a_matrix : transpose(problem.a_matrix);
  const Eigen::MatrixXd starts = forward ? problem.init_space : problem.output_matrix.transpose();
  const Eigen::MatrixXd proj = forward ? problem.output_matrix : problem.init_space.transpose();

  std::vector<Job> jobs(static_cast<std::size_t>(starts.cols()));
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    jobs[j].start = starts.col(static_cast<Eigen::Index>(j));
    jobs[j].record.start_index = j;
  }

  const double dt = problem.step;
  const double tau = problem.time_bound;

  switch (strategy) {
    case Strategy::DenseExpm: {
      const Eigen::MatrixXd propagator = expm(system.to_dense() * dt);
      run_jobs(jobs, options.threads, [&](Job& job) {
        job.trajectory.resize(proj.rows(), static_cast<Eigen::Index>(count));
        Eigen::VectorXd x = job.start;
        for (std::size_t s = 0; s < count; ++s) {
          if (s > 0) x = propagator * x;
          job.trajectory.col(static_cast<Eigen::Index>(s)) = proj * x;
        }
      });
      break;
    }
    case Strategy::Rk45: {
      run_jobs(jobs, options.threads, [&](Job& job) {
        job.trajectory.resize(proj.rows(), static_cast<Eigen::Index>(count));
        rk45_integrate(
            system, std::span<const double>(job.start.data(), job.start.size()), dt, count,
            [&](std::size_t s, std::span<const double> x) {
              job.trajectory.col(static_cast<Eigen::Index>(s)) =
                  proj * Eigen::Map<const Eigen::VectorXd>(x.data(), n);
            },
            options.rk45);
      });
      break;
    }
    case Strategy::KrylovArnoldi:
    case Strategy::KrylovLanczos: {
      const double nu = options.nu ? *options.nu : log_norm_of_negated(system, options.nu_tol);
      const SparseMatrix negated = system.scaled(-1.0);
      KrylovOptions kopts = options.krylov;
      kopts.check_symmetry = false;  // gated above
      // The bound is for a unit start vector; an entry of the basis matrix
      // picks up the start norm and the norm of its projection row.
      const double proj_norm = proj.rows() > 0 ? proj.rowwise().norm().maxCoeff() : 0.0;
      run_jobs(jobs, options.threads, [&](Job& job) {
        const std::span<const double> v(job.start.data(), job.start.size());
        job.scale = job.start.norm() * proj_norm;
        const double eps = job.scale > 0.0 ? options.epsilon / job.scale : options.epsilon;
        KrylovDecomposition dec =
            strategy == Strategy::KrylovArnoldi
                ? project(arnoldi_adaptive(negated, v, tau, eps, nu, kopts), proj)
                : lanczos_projected_adaptive(negated, v, proj, tau, eps, nu, kopts);
        job.record.k = dec.k;
        job.record.bound = dec.error_bound;
        job.record.exact_breakdown = dec.exact_breakdown;
        job.record.trace = dec.trace;
        // e^{tA} v = e^{-t B} v with B = -A.
        job.trajectory = krylov_eval_grid(dec, -dt, count);
      });
      for (const Job& job : jobs)
        seq.certified_error = std::max(seq.certified_error, job.record.bound * job.scale);
      break;
    }
  }

  seq.entries.assign(count, Eigen::MatrixXd::Zero(o, i));
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    for (std::size_t s = 0; s < count; ++s) {
      const auto sc = static_cast<Eigen::Index>(s);
      if (forward)
        seq.entries[s].col(col) = jobs[j].trajectory.col(sc);
      else
        seq.entries[s].row(col) = jobs[j].trajectory.col(sc).transpose();
    }
    seq.simulations.push_back(std::move(jobs[j].record));
  }
  return seq;
}

}  // namespace kreach
