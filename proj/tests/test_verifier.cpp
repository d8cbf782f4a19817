#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "kreach/benchgen.hpp"
#include "kreach/errors.hpp"
#include "kreach/verifier.hpp"
#include "test_util.hpp"

using namespace kreach;
using testutil::Rng;

namespace {

constexpr Strategy kAll[] = {Strategy::DenseExpm, Strategy::Rk45, Strategy::KrylovArnoldi,
                             Strategy::KrylovLanczos};

VerificationProblem make_problem(const Eigen::MatrixXd& a, const Eigen::MatrixXd& e,
                                 const Eigen::MatrixXd& c, LinearConstraintSet init,
                                 LinearConstraintSet unsafe, double step, double bound) {
  ProblemSpec spec;
  spec.a_matrix = SparseMatrix::from_dense(a);
  spec.init_space = e;
  spec.init_constraints = std::move(init);
  spec.output_matrix = c;
  spec.unsafe_constraints = std::move(unsafe);
  spec.step = step;
  spec.time_bound = bound;
  ValidationOptions v;
  v.require_unsafe = false;
  return finalize_problem(std::move(spec), v);
}

LinearConstraintSet unit_box(Eigen::Index dim) {
  return box_constraints(Eigen::VectorXd::Constant(dim, -1.0), Eigen::VectorXd::Ones(dim));
}

double max_entry_difference(const BasisSequence& a, const BasisSequence& b) {
  EXPECT_EQ(a.steps(), b.steps());
  double worst = 0.0;
  for (std::size_t j = 0; j < std::min(a.steps(), b.steps()); ++j)
    worst = std::max(worst, (a.entries[j] - b.entries[j]).cwiseAbs().maxCoeff());
  return worst;
}

// Dense oracle: B_j = C e^{A j step} E.
std::vector<Eigen::MatrixXd> oracle_sequence(const VerificationProblem& p) {
  const Eigen::MatrixXd a = p.a_matrix.to_dense();
  const Eigen::MatrixXd prop = testutil::oracle_expm(a * p.step);
  std::vector<Eigen::MatrixXd> out;
  Eigen::MatrixXd state = p.init_space;
  for (std::size_t j = 0; j <= p.n_steps; ++j) {
    out.push_back(p.output_matrix * state);
    state = prop * state;
  }
  return out;
}

}  // namespace

TEST(BasisSequence, OscillatorStep3AllStrategies) {
  const VerificationProblem osc = gen_oscillator();
  for (Strategy s : {Strategy::DenseExpm, Strategy::Rk45, Strategy::KrylovArnoldi}) {
    const BasisSequence seq = compute_basis_sequence(osc, s);
    ASSERT_EQ(seq.steps(), 5u);
    EXPECT_EQ(seq.direction, Direction::Transpose);
    EXPECT_NEAR(seq.entries[3](0, 0), 0.7071, 1e-4) << to_string(s);
    EXPECT_NEAR(seq.entries[3](0, 1), 3.5355, 1e-4) << to_string(s);
    EXPECT_LT((seq.entries[0] - osc.output_matrix * osc.init_space).cwiseAbs().maxCoeff(), 1e-9);
  }
  EXPECT_THROW(compute_basis_sequence(osc, Strategy::KrylovLanczos), InputError);
}

TEST(BasisSequence, OscillatorTransposeState) {
  const VerificationProblem osc = gen_oscillator();
  const Eigen::Vector4d c(1, 0, 0, 0);
  const Eigen::VectorXd state = testutil::oracle_expm(
                                    osc.a_matrix.to_dense().transpose() * (3 * std::numbers::pi / 4)) *
                                c;
  EXPECT_NEAR(state[0], -std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(state[1], std::sqrt(0.5), 1e-12);
  const Eigen::VectorXd row = osc.init_space.transpose() * state;
  EXPECT_NEAR(row[0], 0.7071, 1e-4);
  EXPECT_NEAR(row[1], 3.5355, 1e-4);
}

TEST(BasisSequence, DirectionRuleAndOverride) {
  Rng rng(61);
  const Eigen::MatrixXd a = -Eigen::MatrixXd::Identity(6, 6) + 0.2 * testutil::random_matrix(rng, 6, 6);
  const VerificationProblem wide =
      make_problem(a, testutil::random_matrix(rng, 6, 3), testutil::random_matrix(rng, 2, 6),
                   unit_box(3), {}, 0.1, 1.0);
  EXPECT_EQ(compute_basis_sequence(wide, Strategy::DenseExpm).direction, Direction::Transpose);
  const VerificationProblem tie =
      make_problem(a, testutil::random_matrix(rng, 6, 2), testutil::random_matrix(rng, 2, 6),
                   unit_box(2), {}, 0.1, 1.0);
  EXPECT_EQ(compute_basis_sequence(tie, Strategy::DenseExpm).direction, Direction::Forward);
  BasisOptions opts;
  opts.direction = Direction::Transpose;
  EXPECT_EQ(compute_basis_sequence(tie, Strategy::DenseExpm, opts).direction, Direction::Transpose);
}

TEST(BasisSequence, StepZeroIsCE) {
  Rng rng(62);
  const Eigen::MatrixXd a = testutil::random_matrix(rng, 8, 8) * 0.3;
  const Eigen::MatrixXd e = testutil::random_matrix(rng, 8, 3);
  const Eigen::MatrixXd c = testutil::random_matrix(rng, 2, 8);
  const VerificationProblem p = make_problem(a, e, c, unit_box(3), {}, 0.25, 1.0);
  for (Strategy s : {Strategy::DenseExpm, Strategy::Rk45, Strategy::KrylovArnoldi}) {
    const BasisSequence seq = compute_basis_sequence(p, s);
    EXPECT_EQ(seq.steps(), 5u);
    EXPECT_LT((seq.entries[0] - c * e).cwiseAbs().maxCoeff(), 1e-9) << to_string(s);
  }
}

TEST(BasisSequence, DenseCapGate) {
  HeatParams params;
  params.m = 4;
  const VerificationProblem heat = gen_heat3d(params);
  BasisOptions opts;
  opts.dense_cap = 10;
  EXPECT_THROW(compute_basis_sequence(heat, Strategy::DenseExpm, opts), InputError);
}

TEST(BasisSequence, StrategiesAndDirectionsAgreeOnRandomSystems) {
  Rng rng(63);
  for (int trial = 0; trial < 6; ++trial) {
    const Eigen::Index n = 20 + 30 * trial;
    const bool symmetric = trial % 2 == 0;
    const Eigen::MatrixXd a =
        symmetric ? testutil::random_symmetric(rng, n, -2.0, 0.1)
                  : testutil::random_sparse(rng, n, 0.1, 0.5) - Eigen::MatrixXd::Identity(n, n);
    const VerificationProblem p =
        make_problem(a, testutil::random_matrix(rng, n, 2), testutil::random_matrix(rng, 3, n),
                     unit_box(2), {}, 0.1, 2.0);
    const auto oracle = oracle_sequence(p);
    for (Strategy s : kAll) {
      if (s == Strategy::KrylovLanczos && !symmetric) continue;
      for (Direction d : {Direction::Forward, Direction::Transpose}) {
        BasisOptions opts;
        opts.direction = d;
        const BasisSequence seq = compute_basis_sequence(p, s, opts);
        ASSERT_EQ(seq.steps(), oracle.size());
        double worst = 0.0;
        for (std::size_t j = 0; j < oracle.size(); ++j)
          worst = std::max(worst, (seq.entries[j] - oracle[j]).cwiseAbs().maxCoeff());
        EXPECT_LT(worst, 1e-6) << "trial " << trial << " " << to_string(s) << " " << to_string(d);
      }
    }
  }
}

TEST(BasisSequence, ThreadCountDoesNotChangeResult) {
  HeatParams params;
  params.m = 5;
  const VerificationProblem heat = gen_heat3d(params);
  Rng rng(64);
  const VerificationProblem p = make_problem(heat.a_matrix.to_dense(),
                                             testutil::random_matrix(rng, heat.n(), 4),
                                             testutil::random_matrix(rng, 1, heat.n()),
                                             unit_box(4), {}, 0.5, 5.0);
  BasisOptions one;
  one.threads = 1;
  one.direction = Direction::Forward;
  BasisOptions many = one;
  many.threads = 4;
  const BasisSequence a = compute_basis_sequence(p, Strategy::KrylovLanczos, one);
  const BasisSequence b = compute_basis_sequence(p, Strategy::KrylovLanczos, many);
  EXPECT_EQ(max_entry_difference(a, b), 0.0);
  EXPECT_EQ(a.certified_error, b.certified_error);
  EXPECT_LE(a.certified_error, 1e-6);
  EXPECT_EQ(a.simulations.size(), 4u);
}

TEST(LogNorm, GershgorinShortcutAndEstimate) {
  HeatParams params;
  params.m = 3;
  const VerificationProblem heat = gen_heat3d(params);
  EXPECT_GE(log_norm_of_negated(heat.a_matrix), 0.0);
  Eigen::MatrixXd grow(2, 2);
  grow << 1, 0, 0, -2;
  EXPECT_NEAR(log_norm_of_negated(SparseMatrix::from_dense(grow)), -1.0, 2e-6);
}

TEST(Verify, OscillatorUnsafeAtStep3) {
  const VerificationProblem osc = gen_oscillator();
  for (Strategy s : {Strategy::DenseExpm, Strategy::Rk45, Strategy::KrylovArnoldi}) {
    const Verdict v = verify(osc, s);
    ASSERT_EQ(v.status, VerdictStatus::Unsafe) << to_string(s);
    EXPECT_EQ(v.step, 3u);
    EXPECT_NEAR(v.time, 3 * std::numbers::pi / 4, 1e-9);
    ASSERT_EQ(v.witness_z0.size(), 2);
    EXPECT_NEAR(v.witness_z0[0], (4.0 - 5.0 * std::sqrt(0.5)) / std::sqrt(0.5), 1e-6);
    EXPECT_NEAR(v.witness_z0[1], 1.0, 1e-9);
    EXPECT_NEAR(v.witness_x0[0], -5.0, 1e-9);
    EXPECT_NEAR(v.outputs[0], 4.0, 1e-6);
    ASSERT_TRUE(v.validation_rel_error.has_value());
    // RK45 witnesses carry the integrator tolerance.
    EXPECT_LE(*v.validation_rel_error, s == Strategy::Rk45 ? 1e-7 : 1e-9);
    EXPECT_FALSE(v.tolerance_violation);
    EXPECT_EQ(v.krylov.has_value(), s == Strategy::KrylovArnoldi);
  }
}

TEST(Verify, OscillatorOutOfReachIsSafe) {
  VerificationProblem osc = gen_oscillator();
  osc.unsafe_constraints.rhs[0] = 6.0;
  EXPECT_EQ(verify(osc, Strategy::DenseExpm).status, VerdictStatus::Safe);
  // x = 5 is reached at t = pi.
  osc.unsafe_constraints.rhs[0] = 5.0;
  const Verdict v = verify(osc, Strategy::DenseExpm);
  EXPECT_EQ(v.status, VerdictStatus::Unsafe);
  EXPECT_EQ(v.step, 4u);
}

TEST(Verify, ZeroHorizonHitsStepZero) {
  LinearConstraintSet unsafe;
  unsafe.add_row(Eigen::RowVectorXd::Constant(1, -1.0), ConstraintKind::LessEqual, -0.5);
  const VerificationProblem p =
      make_problem(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2),
                   Eigen::RowVector2d(1, 0), unit_box(2), unsafe, 0.1, 0.0);
  const Verdict v = verify(p, Strategy::DenseExpm);
  ASSERT_EQ(v.status, VerdictStatus::Unsafe);
  EXPECT_EQ(v.step, 0u);
  EXPECT_LE(*v.validation_rel_error, 1e-9);
}

TEST(Verify, WarmStartDoesNotChangeVerdict) {
  HeatParams params;
  params.m = 4;
  params.unsafe_above = 0.05;
  params.bound = 4.0;
  const VerificationProblem heat = gen_heat3d(params);
  VerifyOptions cold;
  cold.warm_start = false;
  const Verdict a = verify(heat, Strategy::KrylovLanczos);
  const Verdict b = verify(heat, Strategy::KrylovLanczos, cold);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.step, b.step);
}

TEST(Verify, ShrinkingInitialSetNeverAddsViolations) {
  Rng rng(65);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd a =
        testutil::random_sparse(rng, 10, 0.3, 0.6) - 0.5 * Eigen::MatrixXd::Identity(10, 10);
    LinearConstraintSet unsafe;
    unsafe.add_row(Eigen::RowVectorXd::Constant(1, -1.0), ConstraintKind::LessEqual, -1.0 - u(rng));
    VerificationProblem p =
        make_problem(a, testutil::random_matrix(rng, 10, 3), testutil::random_matrix(rng, 1, 10),
                     unit_box(3), unsafe, 0.1, 2.0);
    const BasisSequence seq = compute_basis_sequence(p, Strategy::DenseExpm);
    const Verdict wide = check_basis_sequence(p, seq);
    p.init_constraints.rhs *= 0.5;
    const Verdict narrow = check_basis_sequence(p, seq);
    if (wide.status == VerdictStatus::Safe) {
      EXPECT_EQ(narrow.status, VerdictStatus::Safe);
    }
    if (narrow.status == VerdictStatus::Unsafe) {
      EXPECT_EQ(wide.status, VerdictStatus::Unsafe);
      EXPECT_LE(wide.step, narrow.step);
    }
  }
}

TEST(Validate, OscillatorAndStepZero) {
  const VerificationProblem osc = gen_oscillator();
  const double s = std::sqrt(0.5);
  const Eigen::Vector2d z0((4.0 - 5.0 * s) / s, 1.0);
  EXPECT_LE(validate_counterexample(osc, z0, 3, Eigen::VectorXd::Constant(1, 4.0)), 1e-9);
  const Eigen::VectorXd y0 = osc.output_matrix * osc.init_space * z0;
  EXPECT_LE(validate_counterexample(osc, z0, 0, y0), 1e-15);
  EXPECT_GT(validate_counterexample(osc, z0, 3, Eigen::VectorXd::Constant(1, 4.1)), 1e-2);
}

TEST(ProjectBounds, OscillatorStep3) {
  const VerificationProblem osc = gen_oscillator();
  const auto bounds = project_bounds(osc, 0, Strategy::DenseExpm);
  ASSERT_EQ(bounds.size(), 5u);
  EXPECT_NEAR(bounds[3].min, 3.5355, 1e-4);
  EXPECT_NEAR(bounds[3].max, 4.2426, 1e-4);
  EXPECT_NEAR(bounds[0].min, -5.0, 1e-12);
  EXPECT_NEAR(bounds[0].max, -5.0, 1e-12);
  for (const auto& b : bounds) EXPECT_LE(b.min, b.max + 1e-12);
  EXPECT_THROW(project_bounds(osc, 1, Strategy::DenseExpm), InputError);
}

TEST(ProjectBounds, HeatCenterPeaksInWindow) {
  HeatParams params;
  params.m = 5;
  const VerificationProblem heat = gen_heat3d(params);
  const auto bounds = project_bounds(heat, 0, Strategy::KrylovLanczos);
  ASSERT_EQ(bounds.size(), 1001u);
  const auto oracle = oracle_sequence(heat);
  std::size_t peak = 0;
  for (std::size_t j = 0; j < bounds.size(); ++j) {
    EXPECT_NEAR(bounds[j].max, oracle[j](0, 0) * 1.1, 1e-6);
    EXPECT_NEAR(bounds[j].min, oracle[j](0, 0) * 0.9, 1e-6);
    if (bounds[j].max > bounds[peak].max) peak = j;
  }
  EXPECT_GE(bounds[peak].time, 10.0);
  EXPECT_LE(bounds[peak].time, 20.0);
}

TEST(EstimateMemory, Examples) {
  EXPECT_EQ(estimate_memory(10923, 10, 2, 20000, 63, Strategy::KrylovArnoldi).basis_storage,
            3'200'000u);
  const auto big = estimate_memory(1'000'000'000, 1, 1, 1000, 5932, Strategy::KrylovArnoldi);
  EXPECT_EQ(big.iteration_storage, 5932ull * (1'000'000'000ull + 5932ull) * 8ull);
  EXPECT_NEAR(static_cast<double>(big.iteration_storage), 47.5e12, 0.1e12);
  EXPECT_EQ(estimate_memory(100, 3, 2, 10, 0, Strategy::KrylovArnoldi).iteration_storage, 0u);
  EXPECT_EQ(estimate_memory(100, 3, 2, 10, 0, Strategy::KrylovLanczos).iteration_storage,
            (100u * 2u + 300u) * 8u);
  EXPECT_EQ(estimate_memory(100, 3, 2, 10, 7, Strategy::KrylovLanczos).iteration_storage,
            (21u + 200u + 300u) * 8u);
  EXPECT_EQ(estimate_memory(100, 3, 2, 10, 7, Strategy::DenseExpm).iteration_storage,
            100u * 100u * 8u);
  EXPECT_EQ(estimate_memory(100, 3, 2, 10, 7, Strategy::Rk45).iteration_storage, 900u * 8u);
}

TEST(AutoSelect, Examples) {
  EXPECT_EQ(strategy_auto_select(gen_oscillator()), Strategy::DenseExpm);
  HeatParams params;
  params.m = 10;
  EXPECT_EQ(strategy_auto_select(gen_heat3d(params)), Strategy::KrylovLanczos);
  params.m = 5;
  EXPECT_EQ(strategy_auto_select(gen_heat3d(params), 100), Strategy::KrylovLanczos);
  Rng rng(66);
  const Eigen::MatrixXd a = testutil::random_sparse(rng, 30, 0.1, 1.0);
  const VerificationProblem p = make_problem(a, testutil::random_matrix(rng, 30, 1),
                                             testutil::random_matrix(rng, 1, 30), unit_box(1), {},
                                             0.1, 1.0);
  EXPECT_EQ(strategy_auto_select(p, 10), Strategy::KrylovArnoldi);
}

TEST(Integrators, Rk45MatchesOracle) {
  Rng rng(67);
  const Eigen::MatrixXd a = testutil::random_sparse(rng, 15, 0.3, 1.0) - Eigen::MatrixXd::Identity(15, 15);
  const Eigen::VectorXd x0 = testutil::random_vector(rng, 15);
  const SparseMatrix sa = SparseMatrix::from_dense(a);
  std::vector<Eigen::VectorXd> grid;
  rk45_integrate(sa, as_span(x0), 0.3, 11, [&](std::size_t j, std::span<const double> x) {
    EXPECT_EQ(j, grid.size());
    grid.emplace_back(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())));
  });
  ASSERT_EQ(grid.size(), 11u);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Eigen::VectorXd exact = testutil::oracle_expm(a * (0.3 * j)) * x0;
    EXPECT_LT((grid[j] - exact).norm(), 1e-7 * (1 + exact.norm())) << j;
  }
}

TEST(Integrators, TaylorMatchesOracle) {
  Rng rng(68);
  const Eigen::MatrixXd a = 3.0 * testutil::random_matrix(rng, 12, 12);
  const Eigen::VectorXd x0 = testutil::random_vector(rng, 12);
  const SparseMatrix sa = SparseMatrix::from_dense(a);
  for (double t : {0.0, 0.1, 1.0}) {
    const Eigen::VectorXd exact = testutil::oracle_expm(a * t) * x0;
    EXPECT_LT((taylor_propagate(sa, as_span(x0), t) - exact).norm(), 1e-10 * (1 + exact.norm()));
  }
}
