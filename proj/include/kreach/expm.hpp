#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Dense>

namespace kreach {

using DenseMatrix = Eigen::MatrixXd;

/// Matrix exponential by scaling and squaring with diagonal Padé approximants
/// of degree 3, 5, 7, 9 or 13, chosen from the 1-norm. Throws NumericalError
/// on non-finite input or a non-square matrix.
DenseMatrix expm(const DenseMatrix& m);

/// First column of e^{M t}.
Eigen::VectorXd expm_action_column(const DenseMatrix& m, double t);

/// Columns e^{M j dt} e_1 for j = 0..count-1. One exponential of M dt is
/// formed and reused, so the cost is one expm plus count matrix-vector
/// products.
DenseMatrix expm_action_column_grid(const DenseMatrix& m, double dt, std::size_t count);

/// (k,1) entry of e^{-t H} for a k x k matrix H.
double h_entry(const DenseMatrix& h, double t);

/// Fills `values` (size panels+1) with f(j * tau / panels).
using UniformSampler = std::function<void(std::size_t panels, std::span<double> values)>;

struct QuadratureOptions {
  double rel_tol = 1e-3;
  std::size_t initial_panels = 64;
  std::size_t max_panels = std::size_t{1} << 22;
};

/// Composite Simpson estimate of the integral of |f| over [0, tau]. The panel
/// count doubles until successive estimates agree to rel_tol. Throws
/// NumericalError carrying the last estimate when max_panels is reached.
double integrate_abs_uniform(const UniformSampler& sampler, double tau,
                             const QuadratureOptions& options = {});

/// Fills `values` (size panels+1) with f(t0 + j * (t1 - t0) / panels).
using SegmentSampler =
    std::function<void(double t0, double t1, std::size_t panels, std::span<double> values)>;

/// Integral of |f| over [0, tau] on a graded grid for integrands whose fast
/// transients near t = 0 decay at rates up to `stiffness`. The first segment
/// [0, s] is sampled with spacing at most 1/(2 stiffness); later segments
/// double in length. Each segment is integrated with integrate_abs_uniform.
double integrate_abs_graded(const SegmentSampler& sampler, double tau, double stiffness,
                            const QuadratureOptions& options = {});

/// Integral over [0, tau] of |h(t)|, h(t) the (k,1) entry of e^{-t H}.
double integrate_abs_h(const DenseMatrix& h, double tau, double rel_tol = 1e-3);
double integrate_abs_h(const DenseMatrix& h, double tau, const QuadratureOptions& options);

}  // namespace kreach
