#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "kreach/verifier.hpp"

namespace kreach {

/// Verdicts whose full-state witness is longer than this write it to a side
/// file instead of inlining it.
inline constexpr Eigen::Index kInlineWitnessLimit = 1000;

/// {"status", "step", "time", "witness_z0", "witness_x0" | "witness_x0_path",
///  "outputs", "validation_rel_error", "krylov": {"k", "bound"}}. The step
/// fields are present only for UNSAFE verdicts. `witness_x0_path` names the
/// file the caller wrote the state to when it is too long to inline.
nlohmann::json verdict_to_json(const Verdict& verdict,
                               const std::optional<std::filesystem::path>& witness_x0_path = {});

/// One number per line.
void write_vector(const std::filesystem::path& path, const Eigen::VectorXd& v);

/// Header `step,time,min,max`, one row per step.
void write_bounds_csv(std::ostream& out, const std::vector<StepBounds>& bounds);
nlohmann::json bounds_to_json(const std::vector<StepBounds>& bounds);

}  // namespace kreach
