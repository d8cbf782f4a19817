#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kreach/constraints.hpp"

namespace kreach {

enum class LpStatus { Feasible, Infeasible, Optimal, Unbounded };
enum class ObjectiveSense { Minimize, Maximize };

const char* to_string(LpStatus status);

struct Objective {
  Eigen::VectorXd coeffs;
  ObjectiveSense sense = ObjectiveSense::Minimize;
};

/// All variables are free; every restriction is a constraint row.
struct LinearProgram {
  std::vector<std::string> variable_names;
  LinearConstraintSet constraints;
  std::optional<Objective> objective;

  std::size_t num_variables() const { return variable_names.size(); }
};

/// Simplex basis that can seed the next solve (warm start). Opaque to callers.
struct SimplexBasis {
  std::vector<int> basic;            // variable index per row
  std::vector<signed char> at_upper;  // per variable, meaningful when nonbasic
  bool empty() const { return basic.empty(); }
};

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd assignment;  // set when Feasible or Optimal
  double objective_value = 0.0;
  /// Row multipliers proving infeasibility; set when Infeasible.
  Eigen::VectorXd farkas;
  SimplexBasis basis;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  /// Postcondition tolerance for returned assignments.
  double check_tol = 1e-6;
  /// Degenerate pivots tolerated (times row count) before switching to Bland's rule.
  std::size_t bland_factor = 10;
  std::size_t refactor_interval = 50;
  /// 0 selects 50 * (rows + columns) + 1000.
  std::size_t max_iterations = 0;
#ifdef NDEBUG
  bool verify_certificates = false;
#else
  bool verify_certificates = true;
#endif
};

/// Variables (y_1..y_o, z_1..z_i); rows y - basis z = 0, then the initial
/// constraints over z, then the unsafe constraints over y.
LinearProgram build_step_lp(const Eigen::MatrixXd& basis, const LinearConstraintSet& init,
                            const LinearConstraintSet& unsafe);

/// Replaces the basis-matrix block of a program produced by build_step_lp.
void update_step_lp(LinearProgram& lp, const Eigen::MatrixXd& basis);

LpOutcome solve_feasibility(const LinearProgram& lp, const SimplexOptions& options = {},
                            const SimplexBasis* warm = nullptr);

/// Throws InputError if the program has no objective.
LpOutcome solve_optimize(const LinearProgram& lp, const SimplexOptions& options = {},
                         const SimplexBasis* warm = nullptr);

/// True if `ray` proves the constraint rows of `lp` infeasible with margin
/// `tol`: the range of ray^T(Ax + s) over the variable/slack box excludes
/// ray^T b.
bool verify_farkas(const LinearProgram& lp, const Eigen::VectorXd& ray, double tol);

}  // namespace kreach
