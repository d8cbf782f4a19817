#include "kreach/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kreach/errors.hpp"

namespace kreach {

Verdict check_basis_sequence(const VerificationProblem& problem, const BasisSequence& sequence,
                             const VerifyOptions& options) {
  if (sequence.entries.empty()) throw InputError("check_basis_sequence: empty basis sequence");
  Verdict verdict;
  verdict.strategy = sequence.strategy;
  verdict.direction = sequence.direction;
  if (sequence.strategy == Strategy::KrylovArnoldi ||
      sequence.strategy == Strategy::KrylovLanczos) {
    std::size_t k = 0;
    for (const SimulationRecord& r : sequence.simulations) k = std::max(k, r.k);
    verdict.krylov = std::make_pair(k, sequence.certified_error);
  }

  const auto o = problem.o();
  const auto i = problem.i();
  LinearProgram lp = build_step_lp(sequence.entries[0], problem.init_constraints,
                                   problem.unsafe_constraints);
  SimplexBasis warm;
  for (std::size_t j = 0; j < sequence.entries.size(); ++j) {
    update_step_lp(lp, sequence.entries[j]);
    const bool use_warm = options.warm_start && !warm.empty();
    LpOutcome outcome = solve_feasibility(lp, options.simplex, use_warm ? &warm : nullptr);
    if (outcome.status == LpStatus::Feasible) {
      verdict.status = VerdictStatus::Unsafe;
      verdict.step = j;
      verdict.time = problem.time_at(j);
      verdict.outputs = outcome.assignment.head(o);
      verdict.witness_z0 = outcome.assignment.segment(o, i);
      verdict.witness_x0 = problem.init_space * verdict.witness_z0;
      if (options.validate) {
        const double err =
            validate_counterexample(problem, verdict.witness_z0, j, verdict.outputs);
        verdict.validation_rel_error = err;
        verdict.tolerance_violation = !(err <= options.validation_tol);
      }
      return verdict;
    }
    if (options.warm_start) warm = std::move(outcome.basis);
  }
  verdict.status = VerdictStatus::Safe;
  return verdict;
}

Verdict verify(const VerificationProblem& problem, Strategy strategy,
               const VerifyOptions& options) {
  const BasisSequence seq = compute_basis_sequence(problem, strategy, options.basis);
  return check_basis_sequence(problem, seq, options);
}

double validate_counterexample(const VerificationProblem& problem, const Eigen::VectorXd& z0,
                               std::size_t step_index, const Eigen::VectorXd& outputs) {
  if (z0.size() != problem.i() || outputs.size() != problem.o())
    throw InputError("validate_counterexample: witness has the wrong dimension");
  const Eigen::VectorXd x0 = problem.init_space * z0;
  const Eigen::VectorXd x = taylor_propagate(
      problem.a_matrix, std::span<const double>(x0.data(), x0.size()), problem.time_at(step_index));
  return (problem.output_matrix * x - outputs).norm() / std::max(1.0, outputs.norm());
}

std::vector<StepBounds> project_bounds(const VerificationProblem& problem,
                                       const BasisSequence& sequence, std::size_t output_index,
                                       const SimplexOptions& options) {
  if (output_index >= static_cast<std::size_t>(problem.o()))
    throw InputError("project_bounds: output index " + std::to_string(output_index) +
                     " out of range (o = " + std::to_string(problem.o()) + ")");
  LinearConstraintSet none;
  LinearProgram lp = build_step_lp(sequence.entries.at(0), problem.init_constraints, none);
  Objective objective;
  objective.coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lp.num_variables()));
  objective.coeffs[static_cast<Eigen::Index>(output_index)] = 1.0;

  std::vector<StepBounds> out;
  out.reserve(sequence.entries.size());
  SimplexBasis warm_min, warm_max;
  for (std::size_t j = 0; j < sequence.entries.size(); ++j) {
    update_step_lp(lp, sequence.entries[j]);
    StepBounds b{j, problem.time_at(j), 0.0, 0.0};
    for (ObjectiveSense sense : {ObjectiveSense::Minimize, ObjectiveSense::Maximize}) {
      objective.sense = sense;
      lp.objective = objective;
      SimplexBasis& warm = sense == ObjectiveSense::Minimize ? warm_min : warm_max;
      LpOutcome r = solve_optimize(lp, options, warm.empty() ? nullptr : &warm);
      if (r.status != LpStatus::Optimal)
        throw NumericalError(std::string("project_bounds: step ") + std::to_string(j) + " is " +
                             to_string(r.status));
      (sense == ObjectiveSense::Minimize ? b.min : b.max) = r.objective_value;
      warm = std::move(r.basis);
    }
    out.push_back(b);
  }
  return out;
}

std::vector<StepBounds> project_bounds(const VerificationProblem& problem,
                                       std::size_t output_index, Strategy strategy,
                                       const BasisOptions& options) {
  const BasisSequence seq = compute_basis_sequence(problem, strategy, options);
  return project_bounds(problem, seq, output_index);
}

MemoryEstimate estimate_memory(std::uint64_t n, std::uint64_t i, std::uint64_t o, std::uint64_t s,
                               std::uint64_t k, Strategy strategy) {
  constexpr std::uint64_t word = sizeof(double);
  MemoryEstimate m;
  m.basis_storage = o * i * s * word;
  switch (strategy) {
    case Strategy::KrylovArnoldi: m.iteration_storage = k * (n + k) * word; break;
    case Strategy::KrylovLanczos:
      m.iteration_storage = (3 * k + n * std::min(i, o) + 3 * n) * word;
      break;
    case Strategy::DenseExpm: m.iteration_storage = n * n * word; break;
    case Strategy::Rk45: m.iteration_storage = 9 * n * word; break;
  }
  return m;
}

Strategy strategy_auto_select(const VerificationProblem& problem, std::size_t dense_cap) {
  if (static_cast<std::size_t>(problem.n()) <= dense_cap) return Strategy::DenseExpm;
  if (is_symmetric(problem.a_matrix, 1e-12)) return Strategy::KrylovLanczos;
  return Strategy::KrylovArnoldi;
}

}  // namespace kreach
