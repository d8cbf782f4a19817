#include "kreach/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kreach/errors.hpp"
#include "kreach/expm.hpp"

namespace kreach {

void tridiagonal_eigen(const Tridiagonal& t, Vector& d, std::span<double> rows,
                       std::size_t row_count) {
  const int n = static_cast<int>(t.size());
  if (rows.size() != row_count * static_cast<std::size_t>(n))
    throw NumericalError("tridiagonal_eigen: tracked rows have the wrong size");
  d.assign(t.diag.begin(), t.diag.end());
  Vector e(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) e[i] = t.off[i];
  auto z = [&](std::size_t r, int c) -> double& { return rows[r * n + c]; };
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw NumericalError("tridiagonal_eigen: QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < row_count; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

double integrate_abs_h_tridiagonal(const Tridiagonal& t, double tau, double rel_tol,
                                   std::size_t initial_panels) {
  const std::size_t k = t.size();
  if (k == 0) throw NumericalError("integrate_abs_h_tridiagonal: empty matrix");
  Vector lambda;
  Vector rows(2 * k, 0.0);
  rows[0] = 1.0;              // e_1^T
  rows[k + (k - 1)] = 1.0;    // e_k^T
  tridiagonal_eigen(t, lambda, rows, 2);
  // h(t) = sum_j Q(k,j) Q(1,j) exp(-t lambda_j)
  Vector weight(k);
  for (std::size_t j = 0; j < k; ++j) weight[j] = rows[j] * rows[k + j];

  double stiffness = 0.0;
  for (double l : lambda) stiffness = std::max(stiffness, std::abs(l));

  const SegmentSampler sampler = [&](double t0, double t1, std::size_t panels,
                                     std::span<double> values) {
    const double dt = (t1 - t0) / static_cast<double>(panels);
    for (std::size_t s = 0; s <= panels; ++s) {
      const double time = t0 + dt * static_cast<double>(s);
      double sum = 0.0;
      for (std::size_t j = 0; j < k; ++j) sum += weight[j] * std::exp(-time * lambda[j]);
      values[s] = sum;
    }
  };
  QuadratureOptions options;
  options.rel_tol = rel_tol;
  options.initial_panels = initial_panels;
  return integrate_abs_graded(sampler, tau, stiffness, options);
}

}  // namespace kreach
