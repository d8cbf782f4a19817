#include "simplex.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>

#include "kreach/errors.hpp"

namespace kreach::detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const SimplexOptions& options)
      : a_(lp.constraints.matrix),
        b_(lp.constraints.rhs),
        m_(static_cast<int>(lp.constraints.size())),
        n_(static_cast<int>(lp.num_variables())),
        options_(options) {
    lb_.assign(n_ + m_, -kInf);
    ub_.assign(n_ + m_, kInf);
    for (int r = 0; r < m_; ++r) {
      lb_[n_ + r] = 0.0;
      ub_[n_ + r] = lp.constraints.kinds[r] == ConstraintKind::Equal ? 0.0 : kInf;
    }
    cost_ = Eigen::VectorXd::Zero(n_ + m_);
    if (lp.objective) {
      const double sign = lp.objective->sense == ObjectiveSense::Maximize ? -1.0 : 1.0;
      for (int j = 0; j < n_; ++j) cost_[j] = sign * lp.objective->coeffs[j];
      has_objective_ = true;
    }
    x_.assign(n_ + m_, 0.0);
    at_upper_.assign(n_ + m_, 0);
    position_.assign(n_ + m_, -1);
    head_.resize(m_);
  }

  LpOutcome solve(const SimplexBasis* warm) {
    if (!(warm && try_warm_start(*warm))) cold_start();
    const std::size_t cap = options_.max_iterations
                                ? options_.max_iterations
                                : 50 * static_cast<std::size_t>(m_ + n_ + m_) + 1000;
    const std::size_t bland_after = options_.bland_factor * static_cast<std::size_t>(std::max(m_, 1));
    std::size_t degenerate_run = 0;
    bool bland = false;
    std::size_t since_refactor = 0;

    for (std::size_t iter = 0; iter < cap; ++iter) {
      if (since_refactor >= options_.refactor_interval) {
        if (!refactor()) throw NumericalError("simplex: basis became singular");
        since_refactor = 0;
      }
      compute_basic_values();

      // Phase selection and basic costs.
      Eigen::VectorXd cb(m_);
      bool infeasible = false;
      for (int i = 0; i < m_; ++i) {
        const int j = head_[i];
        if (x_[j] < lb_[j] - options_.feasibility_tol) {
          cb[i] = -1.0;
          infeasible = true;
        } else if (x_[j] > ub_[j] + options_.feasibility_tol) {
          cb[i] = 1.0;
          infeasible = true;
        } else {
          cb[i] = 0.0;
        }
      }
      const bool phase_one = infeasible;
      if (!phase_one) {
        if (!has_objective_) return finish(LpStatus::Feasible, iter);
        for (int i = 0; i < m_; ++i) cb[i] = cost_[head_[i]];
      }
      const Eigen::VectorXd pi = binv_.transpose() * cb;

      // Pricing.
      int entering = -1;
      int direction = 0;
      double best = 0.0;
      for (int j = 0; j < n_ + m_; ++j) {
        if (position_[j] >= 0) continue;
        if (lb_[j] == ub_[j]) continue;
        const double d = (phase_one ? 0.0 : cost_[j]) - column_dot(pi, j);
        int dir = 0;
        const bool free = std::isinf(lb_[j]) && std::isinf(ub_[j]);
        if (free) {
          if (std::abs(d) > options_.optimality_tol) dir = d < 0 ? 1 : -1;
        } else if (!at_upper_[j]) {
          if (d < -options_.optimality_tol) dir = 1;
        } else if (d > options_.optimality_tol) {
          dir = -1;
        }
        if (dir == 0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = j;
          direction = dir;
        }
      }
      if (entering < 0) {
        if (phase_one) {
          LpOutcome out = finish(LpStatus::Infeasible, iter);
          out.farkas = pi;
          return out;
        }
        return finish(LpStatus::Optimal, iter);
      }

      const Eigen::VectorXd alpha = binv_ * column(entering);

      // Ratio test (first breakpoint).
      int leave_row = -1;
      bool leave_upper = false;
      double step = kInf;
      double leave_pivot = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (std::abs(alpha[i]) <= options_.pivot_tol) continue;
        const int j = head_[i];
        const double rate = -direction * alpha[i];
        double t;
        bool to_upper;
        if (rate < 0) {
          if (x_[j] > ub_[j] + options_.feasibility_tol) {
            t = (x_[j] - ub_[j]) / -rate;
            to_upper = true;
          } else if (!std::isinf(lb_[j])) {
            t = (x_[j] - lb_[j]) / -rate;
            to_upper = false;
          } else {
            continue;
          }
        } else {
          if (x_[j] < lb_[j] - options_.feasibility_tol) {
            t = (lb_[j] - x_[j]) / rate;
            to_upper = false;
          } else if (!std::isinf(ub_[j])) {
            t = (ub_[j] - x_[j]) / rate;
            to_upper = true;
          } else {
            continue;
          }
        }
        t = std::max(t, 0.0);
        bool take = false;
        if (t < step - 1e-12) {
          take = true;
        } else if (t <= step + 1e-12) {
          take = bland ? head_[i] < head_[leave_row] : std::abs(alpha[i]) > std::abs(leave_pivot);
        }
        if (take) {
          step = t;
          leave_row = i;
          leave_upper = to_upper;
          leave_pivot = alpha[i];
        }
      }

      const double flip = ub_[entering] - lb_[entering];
      if (!std::isinf(flip) && flip <= step) {
        at_upper_[entering] = direction > 0 ? 1 : 0;
        x_[entering] = direction > 0 ? ub_[entering] : lb_[entering];
        degenerate_run = 0;
        continue;
      }
      if (leave_row < 0) {
        if (!phase_one) return finish(LpStatus::Unbounded, iter);
        throw NumericalError("simplex: phase-1 direction without a blocking variable");
      }

      if (step <= 1e-12) {
        if (++degenerate_run > bland_after) bland = true;
      } else {
        degenerate_run = 0;
      }

      const int leaving = head_[leave_row];
      x_[entering] += direction * step;
      position_[leaving] = -1;
      at_upper_[leaving] = leave_upper ? 1 : 0;
      x_[leaving] = leave_upper ? ub_[leaving] : lb_[leaving];
      head_[leave_row] = entering;
      position_[entering] = leave_row;
      pivot_update(alpha, leave_row);
      ++since_refactor;
    }
    throw NumericalError("simplex: iteration cap of " + std::to_string(cap) + " pivots reached");
  }

 private:
  Eigen::VectorXd column(int j) const {
    if (j < n_) return a_.col(j);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m_);
    e[j - n_] = 1.0;
    return e;
  }

  double column_dot(const Eigen::VectorXd& pi, int j) const {
    return j < n_ ? pi.dot(a_.col(j)) : pi[j - n_];
  }

  double nonbasic_value(int j) const {
    if (!std::isinf(lb_[j]) && !std::isinf(ub_[j])) return at_upper_[j] ? ub_[j] : lb_[j];
    if (!std::isinf(lb_[j])) return lb_[j];
    if (!std::isinf(ub_[j])) return ub_[j];
    return 0.0;
  }

  void cold_start() {
    for (int j = 0; j < n_ + m_; ++j) {
      position_[j] = -1;
      at_upper_[j] = 0;
    }
    for (int r = 0; r < m_; ++r) {
      head_[r] = n_ + r;
      position_[n_ + r] = r;
    }
    for (int j = 0; j < n_ + m_; ++j)
      if (position_[j] < 0) x_[j] = nonbasic_value(j);
    binv_ = Eigen::MatrixXd::Identity(m_, m_);
  }

  bool try_warm_start(const SimplexBasis& warm) {
    if (static_cast<int>(warm.basic.size()) != m_ ||
        static_cast<int>(warm.at_upper.size()) != n_ + m_)
      return false;
    std::fill(position_.begin(), position_.end(), -1);
    for (int r = 0; r < m_; ++r) {
      const int j = warm.basic[r];
      if (j < 0 || j >= n_ + m_ || position_[j] >= 0) return false;
      head_[r] = j;
      position_[j] = r;
    }
    for (int j = 0; j < n_ + m_; ++j) {
      at_upper_[j] = warm.at_upper[j];
      if (position_[j] < 0) x_[j] = nonbasic_value(j);
    }
    return refactor();
  }

  bool refactor() {
    Eigen::MatrixXd basis(m_, m_);
    for (int i = 0; i < m_; ++i) basis.col(i) = column(head_[i]);
    if (m_ == 0) {
      binv_.resize(0, 0);
      return true;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    lu.setThreshold(1e-11);
    if (!lu.isInvertible()) return false;
    binv_ = lu.inverse();
    return true;
  }

  void compute_basic_values() {
    Eigen::VectorXd rhs = b_;
    for (int j = 0; j < n_ + m_; ++j) {
      if (position_[j] >= 0 || x_[j] == 0.0) continue;
      if (j < n_) {
        rhs -= x_[j] * a_.col(j);
      } else {
        rhs[j - n_] -= x_[j];
      }
    }
    const Eigen::VectorXd xb = binv_ * rhs;
    for (int i = 0; i < m_; ++i) x_[head_[i]] = xb[i];
  }

  void pivot_update(const Eigen::VectorXd& alpha, int r) {
    binv_.row(r) /= alpha[r];
    for (int i = 0; i < m_; ++i) {
      if (i == r || alpha[i] == 0.0) continue;
      binv_.row(i) -= alpha[i] * binv_.row(r);
    }
  }

  LpOutcome finish(LpStatus status, std::size_t iterations) {
    LpOutcome out;
    out.status = status;
    out.iterations = iterations;
    out.basis.basic = head_;
    out.basis.at_upper.assign(at_upper_.begin(), at_upper_.end());
    if (status == LpStatus::Feasible || status == LpStatus::Optimal) {
      out.assignment.resize(n_);
      for (int j = 0; j < n_; ++j) out.assignment[j] = x_[j];
    }
    return out;
  }

  const Eigen::MatrixXd& a_;
  const Eigen::VectorXd& b_;
  int m_;
  int n_;
  SimplexOptions options_;
  std::vector<double> lb_, ub_, x_;
  std::vector<signed char> at_upper_;
  std::vector<int> position_;
  std::vector<int> head_;
  Eigen::VectorXd cost_;
  bool has_objective_ = false;
  Eigen::MatrixXd binv_;
};

}  // namespace

LpOutcome run_simplex(const LinearProgram& lp, const SimplexOptions& options,
                      const SimplexBasis* warm) {
  RevisedSimplex solver(lp, options);
  return solver.solve(warm);
}

}  // namespace kreach::detail
