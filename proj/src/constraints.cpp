#include "kreach/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kreach/errors.hpp"

namespace kreach {

void LinearConstraintSet::validate(const char* what) const {
  if (static_cast<std::size_t>(matrix.rows()) != kinds.size() ||
      static_cast<std::size_t>(rhs.size()) != kinds.size()) {
    throw InputError(std::string(what) + ": matrix has " + std::to_string(matrix.rows()) +
                     " rows but there are " + std::to_string(kinds.size()) + " kinds and " +
                     std::to_string(rhs.size()) + " right-hand sides");
  }
  if (!matrix.allFinite() || !rhs.allFinite())
    throw InputError(std::string(what) + ": non-finite coefficient");
}

double LinearConstraintSet::max_violation(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd lhs = matrix * x;
  double worst = 0.0;
  for (std::size_t r = 0; r < kinds.size(); ++r) {
    const double d = lhs[r] - rhs[r];
    worst = std::max(worst, kinds[r] == ConstraintKind::Equal ? std::abs(d) : d);
  }
  return worst;
}

void LinearConstraintSet::add_row(const Eigen::RowVectorXd& coeffs, ConstraintKind kind,
                                  double value) {
  if (matrix.rows() == 0 && matrix.cols() == 0) matrix.resize(0, coeffs.size());
  if (coeffs.size() != matrix.cols()) throw InputError("add_row: width mismatch");
  matrix.conservativeResize(matrix.rows() + 1, Eigen::NoChange);
  matrix.row(matrix.rows() - 1) = coeffs;
  rhs.conservativeResize(rhs.size() + 1);
  rhs[rhs.size() - 1] = value;
  kinds.push_back(kind);
}

LinearConstraintSet box_constraints(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  const Eigen::Index d = lo.size();
  LinearConstraintSet set;
  set.matrix = Eigen::MatrixXd::Zero(2 * d, d);
  set.rhs.resize(2 * d);
  for (Eigen::Index k = 0; k < d; ++k) {
    set.matrix(2 * k, k) = -1.0;
    set.rhs[2 * k] = -lo[k];
    set.matrix(2 * k + 1, k) = 1.0;
    set.rhs[2 * k + 1] = hi[k];
  }
  set.kinds.assign(2 * d, ConstraintKind::LessEqual);
  return set;
}

}  // namespace kreach
