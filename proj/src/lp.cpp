#include "kreach/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kreach/errors.hpp"
#include "simplex.hpp"

namespace kreach {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Feasible: return "feasible";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

LinearProgram build_step_lp(const Eigen::MatrixXd& basis, const LinearConstraintSet& init,
                            const LinearConstraintSet& unsafe) {
  const Eigen::Index o = basis.rows();
  const Eigen::Index i = basis.cols();
  if (static_cast<Eigen::Index>(init.width()) != i && !(init.empty() && init.width() == 0))
    throw InputError("build_step_lp: initial constraints have width " +
                     std::to_string(init.width()) + ", basis has " + std::to_string(i) +
                     " columns");
  if (static_cast<Eigen::Index>(unsafe.width()) != o && !(unsafe.empty() && unsafe.width() == 0))
    throw InputError("build_step_lp: unsafe constraints have width " +
                     std::to_string(unsafe.width()) + ", basis has " + std::to_string(o) +
                     " rows");

  LinearProgram lp;
  for (Eigen::Index k = 0; k < o; ++k) lp.variable_names.push_back("y" + std::to_string(k + 1));
  for (Eigen::Index k = 0; k < i; ++k) lp.variable_names.push_back("z" + std::to_string(k + 1));

  const Eigen::Index rows = o + static_cast<Eigen::Index>(init.size() + unsafe.size());
  auto& c = lp.constraints;
  c.matrix = Eigen::MatrixXd::Zero(rows, o + i);
  c.rhs = Eigen::VectorXd::Zero(rows);
  c.kinds.assign(o, ConstraintKind::Equal);
  c.matrix.topLeftCorner(o, o).setIdentity();
  c.matrix.block(0, o, o, i) = -basis;

  Eigen::Index r = o;
  for (std::size_t k = 0; k < init.size(); ++k, ++r) {
    c.matrix.block(r, o, 1, i) = init.matrix.row(k);
    c.rhs[r] = init.rhs[k];
    c.kinds.push_back(init.kinds[k]);
  }
  for (std::size_t k = 0; k < unsafe.size(); ++k, ++r) {
    c.matrix.block(r, 0, 1, o) = unsafe.matrix.row(k);
    c.rhs[r] = unsafe.rhs[k];
    c.kinds.push_back(unsafe.kinds[k]);
  }
  return lp;
}

void update_step_lp(LinearProgram& lp, const Eigen::MatrixXd& basis) {
  const Eigen::Index o = basis.rows();
  const Eigen::Index i = basis.cols();
  if (lp.constraints.matrix.cols() != o + i || lp.constraints.matrix.rows() < o)
    throw InputError("update_step_lp: basis shape does not match the program");
  lp.constraints.matrix.block(0, o, o, i) = -basis;
}

namespace {

void check_assignment(const LinearProgram& lp, const LpOutcome& out, double tol) {
  const auto& c = lp.constraints;
  const Eigen::VectorXd lhs = c.matrix * out.assignment;
  for (std::size_t r = 0; r < c.size(); ++r) {
    const double d = lhs[r] - c.rhs[r];
    const double viol = c.kinds[r] == ConstraintKind::Equal ? std::abs(d) : d;
    if (viol > tol * std::max(1.0, std::abs(c.rhs[r])))
      throw NumericalError("LP assignment violates row " + std::to_string(r) + " by " +
                           std::to_string(viol));
  }
}

LpOutcome solve(const LinearProgram& lp, const SimplexOptions& options, const SimplexBasis* warm) {
  lp.constraints.validate("linear program");
  if (lp.constraints.width() != lp.num_variables())
    throw InputError("linear program: constraint width differs from variable count");
  LpOutcome out = detail::run_simplex(lp, options, warm);
  if (out.status == LpStatus::Feasible || out.status == LpStatus::Optimal) {
    check_assignment(lp, out, options.check_tol);
    if (lp.objective) out.objective_value = lp.objective->coeffs.dot(out.assignment);
  }
  if (out.status == LpStatus::Infeasible && options.verify_certificates &&
      !verify_farkas(lp, out.farkas, 1e-8)) {
    throw NumericalError("LP infeasibility certificate failed verification");
  }
  return out;
}

}  // namespace

LpOutcome solve_feasibility(const LinearProgram& lp, const SimplexOptions& options,
                            const SimplexBasis* warm) {
  if (!lp.objective) return solve(lp, options, warm);
  LinearProgram stripped = lp;
  stripped.objective.reset();
  return solve(stripped, options, warm);
}

LpOutcome solve_optimize(const LinearProgram& lp, const SimplexOptions& options,
                         const SimplexBasis* warm) {
  if (!lp.objective) throw InputError("solve_optimize: program has no objective");
  if (static_cast<std::size_t>(lp.objective->coeffs.size()) != lp.num_variables())
    throw InputError("solve_optimize: objective length differs from variable count");
  return solve(lp, options, warm);
}

bool verify_farkas(const LinearProgram& lp, const Eigen::VectorXd& ray, double tol) {
  const auto& c = lp.constraints;
  if (static_cast<std::size_t>(ray.size()) != c.size()) return false;
  const double scale = ray.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return false;
  const Eigen::VectorXd y = ray / scale;

  // Structural variables are free, so their combined coefficient must vanish.
  const Eigen::VectorXd w = c.matrix.transpose() * y;
  const double col_scale = std::max(1.0, c.matrix.cwiseAbs().maxCoeff());
  if (w.size() > 0 && w.cwiseAbs().maxCoeff() > 1e-9 * col_scale * static_cast<double>(c.size()))
    return false;

  // Slacks of <= rows live in [0, inf); slacks of = rows are fixed at 0.
  // y^T(Ax + s) = y^T s then ranges over [0, inf) or (-inf, 0] depending on signs.
  bool upper_finite = true;  // all y_r <= 0 on <= rows: sup is 0
  bool lower_finite = true;  // all y_r >= 0 on <= rows: inf is 0
  for (std::size_t r = 0; r < c.size(); ++r) {
    if (c.kinds[r] == ConstraintKind::Equal) continue;
    if (y[r] > 1e-12) upper_finite = false;
    if (y[r] < -1e-12) lower_finite = false;
  }
  const double target = y.dot(c.rhs);
  return (upper_finite && target > tol) || (lower_finite && target < -tol);
}

}  // namespace kreach
