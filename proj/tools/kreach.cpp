// Command-line front end: verify, plot, gen, estimate-memory, selftest.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kreach/benchgen.hpp"
#include "kreach/errors.hpp"
#include "kreach/kernels.hpp"
#include "kreach/problem_io.hpp"
#include "kreach/report.hpp"
#include "kreach/selftest.hpp"
#include "kreach/verifier.hpp"

namespace fs = std::filesystem;
using namespace kreach;

namespace {

enum Exit { kSafe = 0, kUnsafe = 1, kUsage = 2, kNumerical = 3 };

const std::map<std::string, std::optional<Strategy>> kStrategies = {
    {"auto", std::nullopt},
    {"dense", Strategy::DenseExpm},
    {"rk45", Strategy::Rk45},
    {"arnoldi", Strategy::KrylovArnoldi},
    {"lanczos", Strategy::KrylovLanczos},
};

const std::map<std::string, Direction> kDirections = {
    {"forward", Direction::Forward},
    {"transpose", Direction::Transpose},
};

struct Common {
  std::string strategy = "auto";
  double epsilon = 1e-6;
  int threads = 0;
  std::string output;
  std::string direction;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--strategy", c.strategy, "Basis computation strategy")
      ->check(CLI::IsMember({"auto", "dense", "rk45", "arnoldi", "lanczos"}));
  cmd->add_option("--epsilon", c.epsilon, "Krylov error target")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", c.threads, "Thread budget (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("-o,--output", c.output, "Output file (default: stdout)");
  cmd->add_option("--direction", c.direction, "Simulation direction (default: fewer simulations)")
      ->check(CLI::IsMember({"forward", "transpose"}));
}

BasisOptions basis_options(const Common& c) {
  BasisOptions options;
  options.epsilon = c.epsilon;
  options.threads = c.threads;
  if (!c.direction.empty()) options.direction = kDirections.at(c.direction);
  kernels::set_thread_budget(c.threads);
  return options;
}

Strategy pick_strategy(const Common& c, const VerificationProblem& problem) {
  const auto chosen = kStrategies.at(c.strategy);
  return chosen ? *chosen : strategy_auto_select(problem);
}

// Writes to the output file if one was given, stdout otherwise.
template <typename Writer>
void emit(const std::string& path, Writer write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  write(out);
}

int run_verify(const std::string& problem_path, const Common& c, bool no_warm_start) {
  const VerificationProblem problem = load_problem(problem_path);
  VerifyOptions options;
  options.basis = basis_options(c);
  options.warm_start = !no_warm_start;
  const Verdict verdict = verify(problem, pick_strategy(c, problem), options);

  std::optional<fs::path> witness_file;
  if (verdict.status == VerdictStatus::Unsafe && verdict.witness_x0.size() > kInlineWitnessLimit) {
    witness_file = c.output.empty() ? fs::path("witness_x0.txt")
                                    : fs::path(c.output).replace_extension(".x0.txt");
    write_vector(*witness_file, verdict.witness_x0);
  }
  const auto doc = verdict_to_json(verdict, witness_file);
  emit(c.output, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
  if (verdict.tolerance_violation)
    std::cerr << "warning: counter-example validation error " << *verdict.validation_rel_error
              << " exceeds " << options.validation_tol << '\n';
  return verdict.status == VerdictStatus::Unsafe ? kUnsafe : kSafe;
}

int run_plot(const std::string& problem_path, const Common& c, std::size_t output_index,
             const std::string& format) {
  ValidationOptions validation;
  validation.require_unsafe = false;
  const VerificationProblem problem = load_problem(problem_path, validation);
  const auto bounds =
      project_bounds(problem, output_index, pick_strategy(c, problem), basis_options(c));
  emit(c.output, [&](std::ostream& out) {
    if (format == "json")
      out << bounds_to_json(bounds).dump(2) << '\n';
    else
      write_bounds_csv(out, bounds);
  });
  return kSafe;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safety verification of high-dimensional linear systems"};
  app.require_subcommand(1);

  Common common;
  std::string problem_path;
  bool no_warm_start = false;
  auto* verify_cmd = app.add_subcommand("verify", "Check a problem for reachable unsafe states");
  verify_cmd->add_option("problem", problem_path, "Problem JSON file")->required();
  verify_cmd->add_flag("--no-warm-start", no_warm_start, "Solve every step LP from scratch");
  add_common(verify_cmd, common);

  std::size_t output_index = 0;
  std::string format = "csv";
  auto* plot_cmd = app.add_subcommand("plot", "Per-step range of one output over the initial set");
  plot_cmd->add_option("problem", problem_path, "Problem JSON file")->required();
  plot_cmd->add_option("--output-index", output_index, "Output row of C to bound");
  plot_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  add_common(plot_cmd, common);

  std::string family;
  std::string gen_dir;
  HeatParams heat;
  std::optional<double> unsafe_above;
  std::size_t copies = 1;
  std::string base_path;
  std::size_t output_state = 7;
  auto* gen_cmd = app.add_subcommand("gen", "Write a benchmark problem");
  gen_cmd->set_help_flag("--help", "Print this help message and exit");
  gen_cmd->add_option("family", family, "oscillator | heat3d | helicopter")
      ->required()
      ->check(CLI::IsMember({"oscillator", "heat3d", "helicopter"}));
  gen_cmd->add_option("-o,--output", gen_dir, "Output directory")->required();
  gen_cmd->add_option("--m", heat.m, "heat3d: cells per axis")->check(CLI::Range(2, 100000));
  gen_cmd->add_option("--unsafe-above", unsafe_above, "heat3d: unsafe center temperature");
  gen_cmd->add_option("--h", copies, "helicopter: number of copies")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--base", base_path, "helicopter: base model problem file");
  gen_cmd->add_option("--output-state", output_state, "helicopter: 0-based state averaged");

  std::uint64_t n = 0, k = 0, i = 0, o = 0, s = 0;
  std::string mem_strategy = "arnoldi";
  auto* mem_cmd = app.add_subcommand("estimate-memory", "Predicted storage in bytes");
  mem_cmd->add_option("--n", n, "System dimension")->required();
  mem_cmd->add_option("--k", k, "Krylov dimension")->required();
  mem_cmd->add_option("--i", i, "Initial-space dimension")->required();
  mem_cmd->add_option("--o", o, "Output-space dimension")->required();
  mem_cmd->add_option("--s", s, "Number of steps")->required();
  mem_cmd->add_option("--strategy", mem_strategy, "Strategy")
      ->check(CLI::IsMember({"dense", "rk45", "arnoldi", "lanczos"}));

  std::uint64_t seed = 1;
  auto* self_cmd = app.add_subcommand("selftest", "Run the built-in property checks");
  self_cmd->add_option("--seed", seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSafe : kUsage;
  }

  try {
    if (*verify_cmd) return run_verify(problem_path, common, no_warm_start);
    if (*plot_cmd) return run_plot(problem_path, common, output_index, format);
    if (*gen_cmd) {
      VerificationProblem problem;
      if (family == "oscillator") {
        problem = gen_oscillator();
      } else if (family == "heat3d") {
        heat.unsafe_above = unsafe_above;
        problem = gen_heat3d(heat);
      } else {
        if (base_path.empty())
          throw InputError("gen helicopter needs --base <problem file of the 28-state model>");
        problem = gen_helicopter(copies, load_helicopter_base(base_path, output_state));
      }
      std::cout << write_problem(gen_dir, problem).string() << '\n';
      return kSafe;
    }
    if (*mem_cmd) {
      const MemoryEstimate m =
          estimate_memory(n, i, o, s, k, *kStrategies.at(mem_strategy));
      const nlohmann::json doc = {{"basis_storage", m.basis_storage},
                                  {"iteration_storage", m.iteration_storage},
                                  {"total", m.basis_storage + m.iteration_storage}};
      std::cout << doc.dump(2) << '\n';
      return kSafe;
    }
    if (*self_cmd) return run_selftest(seed, std::cout) == 0 ? kSafe : kNumerical;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const KrylovLimitError& e) {
    std::cerr << "error: " << e.what() << " (k = " << e.k() << ")\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
