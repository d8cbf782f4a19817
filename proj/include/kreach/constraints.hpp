#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace kreach {

enum class ConstraintKind { LessEqual, Equal };

/// Rows `matrix * x (<= | =) rhs`. Equality rows stay equalities; they are
/// never split into two inequalities.
struct LinearConstraintSet {
  Eigen::MatrixXd matrix;
  std::vector<ConstraintKind> kinds;
  Eigen::VectorXd rhs;

  std::size_t size() const { return kinds.size(); }
  std::size_t width() const { return static_cast<std::size_t>(matrix.cols()); }
  bool empty() const { return kinds.empty(); }

  /// Throws InputError unless matrix rows, kinds and rhs agree.
  void validate(const char* what) const;

  /// Largest violation over all rows (0 when satisfied).
  double max_violation(const Eigen::VectorXd& x) const;
  bool satisfied(const Eigen::VectorXd& x, double tol) const { return max_violation(x) <= tol; }

  void add_row(const Eigen::RowVectorXd& coeffs, ConstraintKind kind, double value);
};

/// Box lo <= x <= hi as 2d inequality rows.
LinearConstraintSet box_constraints(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

}  // namespace kreach
