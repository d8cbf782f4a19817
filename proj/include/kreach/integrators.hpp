#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Dense>

#include "kreach/sparse_matrix.hpp"

namespace kreach {

struct Rk45Options {
  double rel_tol = 1e-9;
  double abs_tol = 1e-9;
  std::size_t max_steps = 50'000'000;
};

/// Called with the grid index j and the state at t = j * dt.
using GridSink = std::function<void(std::size_t j, std::span<const double> x)>;

/// Integrates x' = A x from x(0) = x0 with the Dormand-Prince 5(4) pair and
/// reports the state at t = j * dt for j = 0..count-1. Steps are shortened to
/// land exactly on grid points. Throws NumericalError when the step size
/// underflows or max_steps is exceeded.
void rk45_integrate(const SparseMatrix& a, std::span<const double> x0, double dt, std::size_t count,
                    const GridSink& sink, const Rk45Options& options = {});

/// x(t) for x' = A x by a truncated Taylor series on substeps with
/// ||A||_1 h <= 1; the series is cut once a term drops below tol relative to
/// the partial sum. Kept separate from rk45_integrate so that it can serve as
/// an independent check on simulated trajectories.
Eigen::VectorXd taylor_propagate(const SparseMatrix& a, std::span<const double> x0, double t,
                                 double tol = 1e-12);

}  // namespace kreach
