#include "kreach/problem.hpp"

#include <cmath>
#include <string>

#include "kreach/errors.hpp"
#include "kreach/lp.hpp"

namespace kreach {

std::size_t step_count(double step, double time_bound) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InputError("step must be positive and finite");
  if (!(time_bound >= 0.0) || !std::isfinite(time_bound))
    throw InputError("time_bound must be nonnegative and finite");
  const double ratio = time_bound / step;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw InputError("time_bound / step = " + std::to_string(ratio) + " is not an integer");
  return static_cast<std::size_t>(rounded);
}

void check_initial_set(const LinearConstraintSet& init) {
  const Eigen::Index dim = static_cast<Eigen::Index>(init.width());
  LinearProgram lp;
  for (Eigen::Index k = 0; k < dim; ++k) lp.variable_names.push_back("z" + std::to_string(k + 1));
  lp.constraints = init;
  SimplexOptions options;
  options.verify_certificates = true;
  const LpOutcome feasible = solve_feasibility(lp, options);
  if (feasible.status != LpStatus::Feasible)
    throw InputError("initial set is empty (init_constraints are infeasible)");
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (const auto sense : {ObjectiveSense::Minimize, ObjectiveSense::Maximize}) {
      lp.objective = Objective{Eigen::VectorXd::Unit(dim, k), sense};
      const LpOutcome out = solve_optimize(lp, options, &feasible.basis);
      if (out.status == LpStatus::Unbounded)
        throw InputError("initial set is unbounded along z" + std::to_string(k + 1));
    }
  }
}

VerificationProblem finalize_problem(ProblemSpec spec, const ValidationOptions& options) {
  if (!spec.a_matrix.square()) throw InputError("a_matrix must be square");
  spec.init_constraints.validate("init_constraints");
  spec.unsafe_constraints.validate("unsafe_constraints");

  const Index n0 = spec.a_matrix.rows();
  if (spec.init_space.rows() != n0)
    throw InputError("init_space has " + std::to_string(spec.init_space.rows()) +
                     " rows, expected " + std::to_string(n0));
  if (spec.output_matrix.cols() != n0)
    throw InputError("output_matrix has " + std::to_string(spec.output_matrix.cols()) +
                     " columns, expected " + std::to_string(n0));
  if (spec.init_space.cols() == 0) throw InputError("init_space must have at least one column");
  if (spec.output_matrix.rows() == 0) throw InputError("output_matrix must have at least one row");
  if (static_cast<Index>(spec.init_constraints.width()) != spec.init_space.cols())
    throw InputError("init_constraints width " + std::to_string(spec.init_constraints.width()) +
                     " differs from init_space width " + std::to_string(spec.init_space.cols()));
  if (!spec.unsafe_constraints.empty() &&
      static_cast<Index>(spec.unsafe_constraints.width()) != spec.output_matrix.rows())
    throw InputError("unsafe_constraints width " +
                     std::to_string(spec.unsafe_constraints.width()) +
                     " differs from output count " + std::to_string(spec.output_matrix.rows()));
  if (options.require_unsafe && spec.unsafe_constraints.empty())
    throw InputError("unsafe_constraints must not be empty");
  if (!spec.init_space.allFinite() || !spec.output_matrix.allFinite())
    throw InputError("init_space and output_matrix must be finite");

  VerificationProblem p;
  p.n_steps = step_count(spec.step, spec.time_bound);
  p.step = spec.step;
  p.time_bound = spec.time_bound;

  if (spec.b_vector) {
    const auto& b = *spec.b_vector;
    p.a_matrix = affine_to_linear(spec.a_matrix, b);
    const Index i0 = spec.init_space.cols();
    p.init_space = Eigen::MatrixXd::Zero(n0 + 1, i0 + 1);
    p.init_space.topLeftCorner(n0, i0) = spec.init_space;
    p.init_space(n0, i0) = 1.0;
    p.output_matrix = Eigen::MatrixXd::Zero(spec.output_matrix.rows(), n0 + 1);
    p.output_matrix.leftCols(n0) = spec.output_matrix;
    auto& init = p.init_constraints;
    init.matrix = Eigen::MatrixXd::Zero(spec.init_constraints.size() + 1, i0 + 1);
    init.matrix.topLeftCorner(spec.init_constraints.size(), i0) = spec.init_constraints.matrix;
    init.matrix(spec.init_constraints.size(), i0) = 1.0;
    init.kinds = spec.init_constraints.kinds;
    init.kinds.push_back(ConstraintKind::Equal);
    init.rhs.resize(spec.init_constraints.size() + 1);
    init.rhs.head(spec.init_constraints.size()) = spec.init_constraints.rhs;
    init.rhs[spec.init_constraints.size()] = 1.0;
  } else {
    p.a_matrix = std::move(spec.a_matrix);
    p.init_space = std::move(spec.init_space);
    p.output_matrix = std::move(spec.output_matrix);
    p.init_constraints = std::move(spec.init_constraints);
  }
  p.unsafe_constraints = std::move(spec.unsafe_constraints);
  if (p.unsafe_constraints.empty() && p.unsafe_constraints.matrix.cols() == 0)
    p.unsafe_constraints.matrix.resize(0, p.o());

  if (options.check_initial_set) check_initial_set(p.init_constraints);
  return p;
}

}  // namespace kreach
