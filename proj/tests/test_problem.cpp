#include <filesystem>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>

#include "kreach/benchgen.hpp"
#include "kreach/errors.hpp"
#include "kreach/problem_io.hpp"

using namespace kreach;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("kreach_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

nlohmann::json oscillator_affine_json() {
  // x' = y, y' = -x, t' = 1 with the constant as a b vector.
  return {
      {"a_matrix", {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}},
      {"b_vector", {0, 0, 1}},
      {"init_space", {{0}, {1}, {0}}},
      {"init_constraints", {{"mat", {{-1}, {1}}}, {"kinds", {"le", "le"}}, {"rhs", {0, 1}}}},
      {"output_matrix", {{1, 0, 0}}},
      {"unsafe_constraints", {{"mat", {{1}}}, {"kinds", {"eq"}}, {"rhs", {4}}}},
      {"step", std::numbers::pi / 4},
      {"time_bound", std::numbers::pi},
  };
}

}  // namespace

TEST(StepCount, IntegerRatioRequired) {
  EXPECT_EQ(step_count(std::numbers::pi / 4, std::numbers::pi), 4u);
  EXPECT_EQ(step_count(0.02, 20.0), 1000u);
  EXPECT_EQ(step_count(0.1, 0.0), 0u);
  EXPECT_THROW(step_count(0.3, 1.0), InputError);
  EXPECT_THROW(step_count(0.0, 1.0), InputError);
  EXPECT_THROW(step_count(0.1, -1.0), InputError);
}

TEST(FinalizeProblem, LiftsAffineSystems) {
  const ProblemSpec spec = parse_problem_spec(oscillator_affine_json(), ".");
  const VerificationProblem p = finalize_problem(spec);
  EXPECT_EQ(p.n(), 4);
  EXPECT_EQ(p.i(), 2);
  EXPECT_EQ(p.o(), 1);
  EXPECT_EQ(p.n_steps, 4u);
  Eigen::MatrixXd expected(4, 4);
  expected << 0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0;
  EXPECT_EQ(p.a_matrix.to_dense(), expected);
  // New initial variable drives the constant state and is pinned to 1.
  EXPECT_EQ(p.init_space(3, 1), 1.0);
  EXPECT_EQ(p.init_space.col(1).sum(), 1.0);
  EXPECT_EQ(p.output_matrix.cols(), 4);
  EXPECT_EQ(p.output_matrix(0, 3), 0.0);
  Eigen::VectorXd z(2);
  z << 0.5, 1.0;
  EXPECT_TRUE(p.init_constraints.satisfied(z, 1e-12));
  z[1] = 0.5;
  EXPECT_FALSE(p.init_constraints.satisfied(z, 1e-6));
}

TEST(FinalizeProblem, RejectsBadInputs) {
  auto doc = oscillator_affine_json();
  doc["init_space"] = {{0}, {1}};
  EXPECT_THROW(finalize_problem(parse_problem_spec(doc, ".")), InputError);

  doc = oscillator_affine_json();
  doc["init_constraints"] = {{"mat", {{1}}}, {"kinds", {"le"}}, {"rhs", {1}}};
  EXPECT_THROW(finalize_problem(parse_problem_spec(doc, ".")), InputError);  // unbounded

  doc = oscillator_affine_json();
  doc["init_constraints"] = {{"mat", {{1}, {-1}}}, {"kinds", {"le", "le"}}, {"rhs", {0, -1}}};
  EXPECT_THROW(finalize_problem(parse_problem_spec(doc, ".")), InputError);  // empty

  doc = oscillator_affine_json();
  doc.erase("unsafe_constraints");
  EXPECT_THROW(finalize_problem(parse_problem_spec(doc, ".")), InputError);
  ValidationOptions relaxed;
  relaxed.require_unsafe = false;
  EXPECT_NO_THROW(finalize_problem(parse_problem_spec(doc, "."), relaxed));

  doc = oscillator_affine_json();
  doc["init_constraints"]["kinds"] = {"le", "ge"};
  EXPECT_THROW(parse_problem_spec(doc, "."), InputError);

  doc = oscillator_affine_json();
  doc.erase("step");
  EXPECT_THROW(parse_problem_spec(doc, "."), InputError);
}

TEST(ProblemIo, SparseEntriesAndMatrixMarketFields) {
  const fs::path dir = temp_dir("fields");
  {
    std::ofstream out(dir / "a.mtx");
    out << "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 1.0\n2 1 -1.0\n";
  }
  nlohmann::json doc = {
      {"a_matrix", "a.mtx"},
      {"init_space", {{"rows", 2}, {"cols", 1}, {"entries", {{0, 0, 1.0}}}}},
      {"init_constraints", {{"mat", {{1}, {-1}}}, {"kinds", {"le", "le"}}, {"rhs", {1, 0}}}},
      {"output_matrix", {{0, 1}}},
      {"unsafe_constraints", {{"mat", {{1}}}, {"kinds", {"le"}}, {"rhs", {-2}}}},
      {"step", 0.5},
      {"time_bound", 1.0},
  };
  std::ofstream(dir / "p.json") << doc.dump();
  const VerificationProblem p = load_problem(dir / "p.json");
  EXPECT_EQ(p.a_matrix.coeff(0, 1), 1.0);
  EXPECT_EQ(p.init_space(0, 0), 1.0);
  EXPECT_EQ(p.init_space(1, 0), 0.0);
  EXPECT_EQ(p.n_steps, 2u);

  doc["a_matrix"] = "missing.mtx";
  std::ofstream(dir / "q.json") << doc.dump();
  EXPECT_THROW(load_problem(dir / "q.json"), InputError);
  EXPECT_THROW(load_problem(dir / "nope.json"), InputError);
}

TEST(ProblemIo, WriteLoadRoundTrip) {
  const VerificationProblem p = gen_oscillator();
  const fs::path dir = temp_dir("roundtrip");
  const fs::path file = write_problem(dir, p);
  const VerificationProblem q = load_problem(file);
  EXPECT_EQ(q.a_matrix, p.a_matrix);
  EXPECT_EQ(q.init_space, p.init_space);
  EXPECT_EQ(q.output_matrix, p.output_matrix);
  EXPECT_EQ(q.init_constraints.matrix, p.init_constraints.matrix);
  EXPECT_EQ(q.init_constraints.kinds, p.init_constraints.kinds);
  EXPECT_EQ(q.unsafe_constraints.rhs, p.unsafe_constraints.rhs);
  EXPECT_EQ(q.step, p.step);
  EXPECT_EQ(q.n_steps, 4u);
}

TEST(ProblemIo, BundledOscillator) {
  const VerificationProblem p = load_problem(fs::path(KREACH_DATA_DIR) / "oscillator.json");
  EXPECT_EQ(p.n(), 4);
  EXPECT_EQ(p.i(), 2);
  EXPECT_EQ(p.o(), 1);
  EXPECT_EQ(p.n_steps, 4u);
  EXPECT_DOUBLE_EQ(p.step, std::numbers::pi / 4);
}

TEST(ProblemIo, GeneratedHeat) {
  HeatParams params;
  params.m = 5;
  const fs::path dir = temp_dir("heat5");
  const fs::path file = write_problem(dir, gen_heat3d(params));
  ValidationOptions options;
  options.require_unsafe = false;
  const VerificationProblem p = load_problem(file, options);
  EXPECT_EQ(p.n(), 125);
  EXPECT_EQ(p.i(), 1);
  EXPECT_EQ(p.o(), 1);
  EXPECT_EQ(p.n_steps, 1000u);
}
