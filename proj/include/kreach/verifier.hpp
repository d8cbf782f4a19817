#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kreach/integrators.hpp"
#include "kreach/krylov.hpp"
#include "kreach/lp.hpp"
#include "kreach/problem.hpp"

namespace kreach {

enum class Strategy { DenseExpm, Rk45, KrylovArnoldi, KrylovLanczos };

/// FORWARD runs i simulations from the columns of E; TRANSPOSE runs o
/// simulations of A^T from the rows of C.
enum class Direction { Forward, Transpose };

const char* to_string(Strategy strategy);
const char* to_string(Direction direction);

struct SimulationRecord {
  std::size_t start_index = 0;  // column of E or row of C
  std::size_t k = 0;
  double bound = 0.0;  // for the normalized start vector
  bool exact_breakdown = false;
  std::vector<Checkpoint> trace;
};

/// B_j = C e^{A j step} E for j = 0..s.
struct BasisSequence {
  std::vector<Eigen::MatrixXd> entries;
  Strategy strategy = Strategy::DenseExpm;
  Direction direction = Direction::Forward;
  /// Krylov strategies: bound on the error of any basis entry. Each
  /// simulation is run to epsilon / (|v| max_r |P_r|), v its start vector and
  /// P the projection applied to its states.
  double certified_error = 0.0;
  std::vector<SimulationRecord> simulations;

  std::size_t steps() const { return entries.size(); }
};

struct BasisOptions {
  double epsilon = 1e-6;
  /// Unset: TRANSPOSE iff o < i.
  std::optional<Direction> direction;
  std::size_t dense_cap = 500;
  /// Threads for the per-column simulations (0 = runtime default).
  int threads = 0;
  KrylovOptions krylov;
  Rk45Options rk45;
  /// Overrides the log-norm estimate of -A.
  std::optional<double> nu;
  double nu_tol = 1e-6;
};

/// Throws InputError when a strategy gate fails (Lanczos on a non-symmetric
/// A, dense beyond dense_cap).
BasisSequence compute_basis_sequence(const VerificationProblem& problem, Strategy strategy,
                                     const BasisOptions& options = {});

/// nu of -A as used by the Krylov strategies: the Gershgorin bound of the
/// symmetric part when it is nonnegative, otherwise estimate_nu.
double log_norm_of_negated(const SparseMatrix& a, double tol = 1e-6);

enum class VerdictStatus { Safe, Unsafe };

struct Verdict {
  VerdictStatus status = VerdictStatus::Safe;
  std::size_t step = 0;
  double time = 0.0;
  Eigen::VectorXd witness_z0;
  Eigen::VectorXd witness_x0;
  Eigen::VectorXd outputs;
  std::optional<double> validation_rel_error;
  /// Set when validation_rel_error exceeds VerifyOptions::validation_tol.
  bool tolerance_violation = false;
  Strategy strategy = Strategy::DenseExpm;
  Direction direction = Direction::Forward;
  /// Krylov strategies: largest k and bound over all simulations.
  std::optional<std::pair<std::size_t, double>> krylov;
};

struct VerifyOptions {
  BasisOptions basis;
  SimplexOptions simplex;
  bool warm_start = true;
  bool validate = true;
  double validation_tol = 1e-6;
};

/// Solves the step LPs j = 0..s in order; the first feasible one gives an
/// UNSAFE verdict with its witness, which is then re-simulated.
Verdict verify(const VerificationProblem& problem, Strategy strategy,
               const VerifyOptions& options = {});

Verdict check_basis_sequence(const VerificationProblem& problem, const BasisSequence& sequence,
                             const VerifyOptions& options = {});

/// Re-simulates x0 = E z0 to t = step_index * step with taylor_propagate and
/// returns ||C x - outputs|| / max(1, ||outputs||).
double validate_counterexample(const VerificationProblem& problem, const Eigen::VectorXd& z0,
                               std::size_t step_index, const Eigen::VectorXd& outputs);

struct StepBounds {
  std::size_t step;
  double time;
  double min;
  double max;
};

/// Range of y[output_index] over the initial set at every step.
std::vector<StepBounds> project_bounds(const VerificationProblem& problem,
                                       const BasisSequence& sequence, std::size_t output_index,
                                       const SimplexOptions& options = {});
std::vector<StepBounds> project_bounds(const VerificationProblem& problem,
                                       std::size_t output_index, Strategy strategy,
                                       const BasisOptions& options = {});

struct MemoryEstimate {
  std::uint64_t basis_storage = 0;
  std::uint64_t iteration_storage = 0;
};

/// Byte counts at 8 bytes per number. Basis storage is o i s. Iteration
/// storage is k (n + k) for Arnoldi and 3k + n min(i, o) + 3n for projected
/// Lanczos; n^2 for the dense propagator and 9n for the RK45 stages.
MemoryEstimate estimate_memory(std::uint64_t n, std::uint64_t i, std::uint64_t o, std::uint64_t s,
                               std::uint64_t k, Strategy strategy);

/// Dense when n <= dense_cap, else Lanczos for symmetric A, else Arnoldi.
Strategy strategy_auto_select(const VerificationProblem& problem, std::size_t dense_cap = 500);

}  // namespace kreach
