#include "kreach/benchgen.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "kreach/errors.hpp"
#include "kreach/problem_io.hpp"

namespace kreach {

VerificationProblem gen_oscillator() {
  ProblemSpec spec;
  Eigen::MatrixXd a(4, 4);
  a << 0, 1, 0, 0,
      -1, 0, 0, 0,
       0, 0, 0, 1,
       0, 0, 0, 0;
  spec.a_matrix = SparseMatrix::from_dense(a);
  spec.init_space.resize(4, 2);
  spec.init_space << 0, -5,
                     1, 0,
                     0, 0,
                     0, 1;
  auto& init = spec.init_constraints;
  init.matrix.resize(0, 2);
  init.add_row(Eigen::RowVector2d(-1, 0), ConstraintKind::LessEqual, 0.0);
  init.add_row(Eigen::RowVector2d(1, 0), ConstraintKind::LessEqual, 1.0);
  init.add_row(Eigen::RowVector2d(0, 1), ConstraintKind::Equal, 1.0);
  spec.output_matrix = Eigen::RowVector4d(1, 0, 0, 0);
  spec.unsafe_constraints.matrix.resize(0, 1);
  spec.unsafe_constraints.add_row(Eigen::RowVectorXd::Ones(1), ConstraintKind::Equal, 4.0);
  spec.step = std::numbers::pi / 4;
  spec.time_bound = std::numbers::pi;
  return finalize_problem(std::move(spec));
}

VerificationProblem gen_heat3d(const HeatParams& p) {
  if (p.m < 2) throw InputError("gen_heat3d: m must be at least 2");
  for (int axis = 0; axis < 3; ++axis)
    if (p.heated_lo[axis] < 0.0 || p.heated_hi[axis] > 1.0 ||
        !(p.heated_lo[axis] < p.heated_hi[axis]))
      throw InputError("gen_heat3d: heated region must be a nonempty box inside the unit cube");

  const auto m = static_cast<Index>(p.m);
  const Index n = m * m * m;
  const double h = 1.0 / static_cast<double>(m);
  const double c = p.alpha / (h * h);
  const double robin = p.alpha * p.exchange_coeff / (h * (1.0 + 0.5 * p.exchange_coeff * h));
  const auto index = [m](Index x, Index y, Index z) { return x + m * (y + m * z); };

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(7 * n));
  for (Index z = 0; z < m; ++z)
    for (Index y = 0; y < m; ++y)
      for (Index x = 0; x < m; ++x) {
        const Index row = index(x, y, z);
        double diag = 0.0;
        const auto neighbor = [&](bool exists, Index col) {
          if (!exists) return;  // mirrored ghost equals the cell: no net flux
          entries.push_back({row, col, c});
          diag -= c;
        };
        neighbor(x > 0, x > 0 ? index(x - 1, y, z) : 0);
        neighbor(x + 1 < m, x + 1 < m ? index(x + 1, y, z) : 0);
        neighbor(y > 0, y > 0 ? index(x, y - 1, z) : 0);
        neighbor(y + 1 < m, y + 1 < m ? index(x, y + 1, z) : 0);
        neighbor(z > 0, z > 0 ? index(x, y, z - 1) : 0);
        neighbor(z + 1 < m, z + 1 < m ? index(x, y, z + 1) : 0);
        if (x + 1 == m) diag -= robin;
        entries.push_back({row, row, diag});
      }

  ProblemSpec spec;
  spec.a_matrix = SparseMatrix::from_triplets(n, n, std::move(entries));

  // Cell i covers [i h, (i + 1) h] and overlaps [lo, hi] in positive length
  // iff lo m - 1 < i < hi m.
  const auto overlaps = [&](Index i, int axis) {
    const double md = static_cast<double>(m);
    const double id = static_cast<double>(i);
    return id > p.heated_lo[axis] * md - 1.0 + 1e-12 && id < p.heated_hi[axis] * md - 1e-12;
  };
  spec.init_space = Eigen::MatrixXd::Zero(n, 1);
  for (Index z = 0; z < m; ++z)
    for (Index y = 0; y < m; ++y)
      for (Index x = 0; x < m; ++x)
        if (overlaps(x, 0) && overlaps(y, 1) && overlaps(z, 2)) spec.init_space(index(x, y, z), 0) = 1.0;

  spec.init_constraints.matrix.resize(0, 1);
  spec.init_constraints.add_row(-Eigen::RowVectorXd::Ones(1), ConstraintKind::LessEqual,
                                -p.temp_lo);
  spec.init_constraints.add_row(Eigen::RowVectorXd::Ones(1), ConstraintKind::LessEqual, p.temp_hi);

  const Index mid = (m - 1) / 2;
  spec.output_matrix = Eigen::MatrixXd::Zero(1, n);
  spec.output_matrix(0, index(mid, mid, mid)) = 1.0;

  ValidationOptions options;
  options.require_unsafe = false;
  if (p.unsafe_above) {
    spec.unsafe_constraints.matrix.resize(0, 1);
    spec.unsafe_constraints.add_row(-Eigen::RowVectorXd::Ones(1), ConstraintKind::LessEqual,
                                    -*p.unsafe_above);
  }
  spec.step = p.step;
  spec.time_bound = p.bound;
  return finalize_problem(std::move(spec), options);
}

HelicopterBase load_helicopter_base(const std::filesystem::path& path, std::size_t output_state) {
  if (!std::filesystem::exists(path))
    throw InputError("helicopter base model not found at " + path.string() +
                     "; the 28-state model is not bundled, see the README section "
                     "'Helicopter base model' for the expected file layout");
  ValidationOptions options;
  options.require_unsafe = false;
  const VerificationProblem base = load_problem(path, options);
  HelicopterBase out;
  out.a_matrix = base.a_matrix;
  out.init_space = base.init_space;
  out.init_constraints = base.init_constraints;
  out.output_state = output_state;
  if (output_state >= static_cast<std::size_t>(base.n()))
    throw InputError("helicopter base: output state " + std::to_string(output_state) +
                     " out of range");
  return out;
}

VerificationProblem gen_helicopter(std::size_t h, const HelicopterBase& base) {
  if (h == 0) throw InputError("gen_helicopter: need at least one copy");
  const Index bn = base.a_matrix.rows();
  const Index bi = base.init_space.cols();
  if (!base.a_matrix.square() || base.init_space.rows() != bn)
    throw InputError("gen_helicopter: base dimensions do not agree");
  base.init_constraints.validate("helicopter base init_constraints");
  if (static_cast<Index>(base.init_constraints.width()) != bi)
    throw InputError("gen_helicopter: base init constraints do not match E");

  const auto copies = static_cast<Index>(h);
  ProblemSpec spec;
  spec.a_matrix = block_diagonal(base.a_matrix, copies);
  spec.init_space = Eigen::MatrixXd::Zero(bn * copies, bi * copies);
  const auto rows = static_cast<Index>(base.init_constraints.size());
  auto& init = spec.init_constraints;
  init.matrix = Eigen::MatrixXd::Zero(rows * copies, bi * copies);
  init.rhs.resize(rows * copies);
  spec.output_matrix = Eigen::MatrixXd::Zero(1, bn * copies);
  for (Index c = 0; c < copies; ++c) {
    spec.init_space.block(c * bn, c * bi, bn, bi) = base.init_space;
    init.matrix.block(c * rows, c * bi, rows, bi) = base.init_constraints.matrix;
    init.rhs.segment(c * rows, rows) = base.init_constraints.rhs;
    init.kinds.insert(init.kinds.end(), base.init_constraints.kinds.begin(),
                      base.init_constraints.kinds.end());
    spec.output_matrix(0, c * bn + static_cast<Index>(base.output_state)) =
        1.0 / static_cast<double>(h);
  }
  spec.unsafe_constraints.matrix.resize(0, 1);
  spec.unsafe_constraints.add_row(-Eigen::RowVectorXd::Ones(1), ConstraintKind::LessEqual, -0.45);
  spec.step = 0.1;
  spec.time_bound = 30.0;
  return finalize_problem(std::move(spec));
}

}  // namespace kreach
