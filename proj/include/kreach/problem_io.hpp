#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "kreach/problem.hpp"

namespace kreach {

/// Parses a problem JSON document. Matrix-valued fields accept a path to a
/// MatrixMarket file (relative to `base_dir`), inline dense rows, or
/// {"rows": r, "cols": c, "entries": [[i, j, v], ...]} with 0-based indices.
ProblemSpec parse_problem_spec(const nlohmann::json& doc, const std::filesystem::path& base_dir);

/// Reads, validates and (when b_vector is present) lifts a problem file.
VerificationProblem load_problem(const std::filesystem::path& path,
                                 const ValidationOptions& options = {});

/// Writes `dir/problem.json` with A, E and C as MatrixMarket files next to it.
/// Returns the path of the JSON file.
std::filesystem::path write_problem(const std::filesystem::path& dir,
                                    const VerificationProblem& problem);

nlohmann::json constraints_to_json(const LinearConstraintSet& set);

}  // namespace kreach
