#include <algorithm>
#include <cmath>
#include <string>

#include "kreach/errors.hpp"
#include "kreach/expm.hpp"
#include "kreach/tracking_allocator.hpp"

namespace kreach {
namespace {

double simpson_abs(std::span<const double> values, double tau) {
  const std::size_t panels = values.size() - 1;
  const double h = tau / static_cast<double>(panels);
  double sum = std::abs(values.front()) + std::abs(values.back());
  for (std::size_t j = 1; j < panels; ++j) sum += (j % 2 ? 4.0 : 2.0) * std::abs(values[j]);
  return sum * h / 3.0;
}

}  // namespace

double integrate_abs_uniform(const UniformSampler& sampler, double tau,
                             const QuadratureOptions& options) {
  if (tau < 0.0) throw NumericalError("integrate_abs: negative horizon");
  if (tau == 0.0) return 0.0;
  std::size_t panels = options.initial_panels < 2 ? 2 : options.initial_panels;
  if (panels % 2) ++panels;
  Vector values(panels + 1);
  sampler(panels, values);
  double previous = simpson_abs(values, tau);
  while (true) {
    panels *= 2;
    if (panels > options.max_panels)
      throw NumericalError("integrate_abs: no convergence with " + std::to_string(panels / 2) +
                           " panels; last estimate " + std::to_string(previous));
    values.assign(panels + 1, 0.0);
    sampler(panels, values);
    const double current = simpson_abs(values, tau);
    if (!std::isfinite(current)) throw NumericalError("integrate_abs: non-finite integrand");
    if (std::abs(current - previous) <= options.rel_tol * std::abs(current) ||
        std::abs(current) < 1e-300)
      return current;
    previous = current;
  }
}

double integrate_abs_graded(const SegmentSampler& sampler, double tau, double stiffness,
                            const QuadratureOptions& options) {
  if (tau < 0.0) throw NumericalError("integrate_abs: negative horizon");
  if (tau == 0.0) return 0.0;
  const double panels = static_cast<double>(options.initial_panels < 2 ? 2 : options.initial_panels);
  double end = tau;
  if (stiffness > 0.0 && std::isfinite(stiffness)) end = std::min(tau, 0.5 * panels / stiffness);
  double start = 0.0;
  double total = 0.0;
  while (true) {
    const double a = start;
    const double b = end;
    const UniformSampler segment = [&](std::size_t count, std::span<double> values) {
      sampler(a, b, count, values);
    };
    total += integrate_abs_uniform(segment, b - a, options);
    if (b >= tau) return total;
    start = b;
    end = std::min(tau, 2.0 * b);
  }
}

double integrate_abs_h(const DenseMatrix& h, double tau, const QuadratureOptions& options) {
  if (h.rows() != h.cols() || h.rows() == 0) throw NumericalError("integrate_abs_h: bad matrix");
  const Eigen::Index k = h.rows();
  const double stiffness = h.cwiseAbs().colwise().sum().maxCoeff();
  const SegmentSampler sampler = [&](double t0, double t1, std::size_t panels,
                                     std::span<double> values) {
    const double dt = (t1 - t0) / static_cast<double>(panels);
    const DenseMatrix propagator = expm(-dt * h);
    Eigen::VectorXd w = t0 == 0.0 ? Eigen::VectorXd(Eigen::VectorXd::Unit(k, 0))
                                  : expm_action_column(-h, t0);
    values[0] = w[k - 1];
    for (std::size_t j = 1; j <= panels; ++j) {
      w = propagator * w;
      values[j] = w[k - 1];
    }
  };
  return integrate_abs_graded(sampler, tau, stiffness, options);
}

double integrate_abs_h(const DenseMatrix& h, double tau, double rel_tol) {
  QuadratureOptions options;
  options.rel_tol = rel_tol;
  return integrate_abs_h(h, tau, options);
}

}  // namespace kreach
