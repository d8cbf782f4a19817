#include "kreach/integrators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "kreach/errors.hpp"

namespace kreach {
namespace {

using Eigen::VectorXd;

VectorXd apply(const SparseMatrix& a, const VectorXd& x) {
  VectorXd y(a.rows());
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (Index r = 0; r < a.rows(); ++r) {
    double sum = 0.0;
    for (Index p = offsets[r]; p < offsets[r + 1]; ++p) sum += vals[p] * x[cols[p]];
    y[r] = sum;
  }
  return y;
}

void check(const SparseMatrix& a, std::span<const double> x0, const char* who) {
  if (!a.square() || static_cast<std::size_t>(a.rows()) != x0.size())
    throw InputError(std::string(who) + ": dimension mismatch");
}

// Dormand-Prince coefficients.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b*, the embedded fourth-order weights subtracted from the fifth-order ones.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

void rk45_integrate(const SparseMatrix& a, std::span<const double> x0, double dt, std::size_t count,
                    const GridSink& sink, const Rk45Options& options) {
  check(a, x0, "rk45_integrate");
  if (count == 0) return;
  if (!(dt > 0.0) && count > 1) throw InputError("rk45_integrate: step must be positive");
  const auto n = static_cast<Eigen::Index>(x0.size());
  VectorXd x = Eigen::Map<const VectorXd>(x0.data(), n);
  sink(0, std::span<const double>(x.data(), x.size()));
  if (count == 1) return;

  const double norm = std::max(a.norm1(), 1e-12);
  double h = std::min(dt, 0.1 / norm);
  double t = 0.0;
  std::size_t next = 1;
  std::size_t steps = 0;
  VectorXd k1 = apply(a, x), k2, k3, k4, k5, k6, k7, y;

  while (next < count) {
    const double target = dt * static_cast<double>(next);
    const double remaining = target - t;
    const bool lands = h >= remaining * (1.0 - 1e-12);
    const double step = lands ? remaining : h;
    if (++steps > options.max_steps) throw NumericalError("rk45_integrate: step limit exceeded");

    k2 = apply(a, x + step * a21 * k1);
    k3 = apply(a, x + step * (a31 * k1 + a32 * k2));
    k4 = apply(a, x + step * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = apply(a, x + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = apply(a, x + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    y = x + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = apply(a, y);
    const VectorXd err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double ratio = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double scale =
          options.abs_tol + options.rel_tol * std::max(std::abs(x[i]), std::abs(y[i]));
      ratio += (err[i] / scale) * (err[i] / scale);
    }
    ratio = std::sqrt(ratio / static_cast<double>(n));

    const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
    if (ratio <= 1.0) {
      t = lands ? target : t + step;
      x.swap(y);
      k1 = k7;
      if (lands) {
        sink(next, std::span<const double>(x.data(), x.size()));
        ++next;
      }
      // A step cut short to land on the grid says nothing about the next one.
      if (!lands || step >= h) h = step * factor;
    } else {
      h = step * factor;
    }
    if (h < 1e-15 * std::max(1.0, target))
      throw NumericalError("rk45_integrate: step size underflow at t = " + std::to_string(t));
  }
}

VectorXd taylor_propagate(const SparseMatrix& a, std::span<const double> x0, double t,
                          double tol) {
  check(a, x0, "taylor_propagate");
  if (t < 0.0) throw InputError("taylor_propagate: negative time");
  const auto n = static_cast<Eigen::Index>(x0.size());
  VectorXd x = Eigen::Map<const VectorXd>(x0.data(), n);
  if (t == 0.0) return x;
  const double norm = a.norm1();
  const auto substeps = static_cast<std::size_t>(std::max(1.0, std::ceil(t * norm)));
  const double h = t / static_cast<double>(substeps);
  for (std::size_t s = 0; s < substeps; ++s) {
    VectorXd term = x;
    VectorXd sum = x;
    for (int j = 1; j < 200; ++j) {
      term = (h / j) * apply(a, term);
      sum += term;
      if (term.norm() <= tol * sum.norm() * 1e-3 || term.norm() == 0.0) break;
    }
    x.swap(sum);
  }
  return x;
}

}  // namespace kreach
