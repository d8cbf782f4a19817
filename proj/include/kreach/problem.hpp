#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kreach/constraints.hpp"
#include "kreach/sparse_matrix.hpp"

namespace kreach {

/// x' = A x with x0 = E z, init constraints over z, outputs y = C x and
/// unsafe constraints over y, checked at t = j * step for j = 0..n_steps.
struct VerificationProblem {
  SparseMatrix a_matrix;
  Eigen::MatrixXd init_space;         // n x i
  LinearConstraintSet init_constraints;  // over i variables
  Eigen::MatrixXd output_matrix;      // o x n
  LinearConstraintSet unsafe_constraints;  // over o variables
  double step = 0.0;
  double time_bound = 0.0;
  std::size_t n_steps = 0;

  Index n() const { return a_matrix.rows(); }
  Index i() const { return init_space.cols(); }
  Index o() const { return output_matrix.rows(); }
  double time_at(std::size_t step_index) const { return step * static_cast<double>(step_index); }
};

/// Problem data before validation. When `b_vector` is set the system is
/// affine and finalize_problem lifts it.
struct ProblemSpec {
  SparseMatrix a_matrix;
  std::optional<std::vector<double>> b_vector;
  Eigen::MatrixXd init_space;
  LinearConstraintSet init_constraints;
  Eigen::MatrixXd output_matrix;
  LinearConstraintSet unsafe_constraints;
  double step = 0.0;
  double time_bound = 0.0;
};

struct ValidationOptions {
  /// Require a nonempty unsafe constraint set (verification problems).
  bool require_unsafe = true;
  /// Solve the feasibility and 2i boundedness LPs on the initial set.
  bool check_initial_set = true;
};

/// s = round(T / step); throws InputError unless T / step is within 1e-9 of
/// an integer.
std::size_t step_count(double step, double time_bound);

/// Validates the problem data and performs the
/// affine-to-linear lifting when a b vector is present: A gets b as an extra
/// column, E gets an extra row and column (the new initial variable maps to
/// the constant state), C gets a zero column, and the new variable is pinned
/// to 1 by an equality row.
VerificationProblem finalize_problem(ProblemSpec spec, const ValidationOptions& options = {});

/// Throws InputError if the initial set is empty or unbounded.
void check_initial_set(const LinearConstraintSet& init);

}  // namespace kreach
