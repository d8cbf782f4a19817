#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>

#include "kreach/problem.hpp"

namespace kreach {

/// Harmonic oscillator x' = y, y' = -x with a clock, in lifted form
/// (x, y, t, a). Initial set x = -5, y in [0, 1]; unsafe x = 4;
/// step pi/4, bound pi.
VerificationProblem gen_oscillator();

struct HeatParams {
  std::size_t m = 10;
  /// Coefficient of the Laplacian in u_t = alpha * Laplace(u).
  double alpha = 0.01;
  /// Robin constant k in u_x = -k u on the x = 1 face; 0 insulates it.
  double exchange_coeff = 0.5;
  std::array<double, 3> heated_lo{0.0, 0.0, 0.0};
  std::array<double, 3> heated_hi{0.4, 0.2, 0.1};
  double temp_lo = 0.9;
  double temp_hi = 1.1;
  double step = 0.02;
  double bound = 20.0;
  /// Adds the unsafe set y >= value on the center temperature.
  std::optional<double> unsafe_above;
};

/// Heat diffusion in the unit cube on an m x m x m cell-centered grid
/// (spacing h = 1/m, centers at (i + 1/2) h), unknowns ordered
/// x + m (y + m z). Insulated faces mirror the cell itself as the ghost; the
/// x = 1 face eliminates the ghost through u_x = -k u at the face, which adds
/// -alpha k / (h (1 + k h / 2)) to those diagonal entries. E is the
/// indicator of the cells overlapping the heated box in positive volume,
/// C selects the cell with index floor((m - 1) / 2) on every axis.
VerificationProblem gen_heat3d(const HeatParams& params);

/// Single-helicopter data the replicated benchmark is built from.
struct HelicopterBase {
  SparseMatrix a_matrix;                 // 28 x 28
  Eigen::MatrixXd init_space;            // 28 x 8
  LinearConstraintSet init_constraints;  // over the 8 initial variables
  std::size_t output_state = 7;          // x8, 0-based
};

/// Reads a base model stored as a problem file (its unsafe set and time
/// fields are ignored). Throws InputError naming the expected location when
/// the file is missing.
HelicopterBase load_helicopter_base(const std::filesystem::path& path,
                                    std::size_t output_state = 7);

/// h block-diagonal copies of the base model; the output averages x8 over
/// the copies and the unsafe set is y >= 0.45. Step 0.1, bound 30.
VerificationProblem gen_helicopter(std::size_t h, const HelicopterBase& base);

}  // namespace kreach
