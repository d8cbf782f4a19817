#pragma once

#include "kreach/lp.hpp"

namespace kreach::detail {

/// Bounded-variable primal revised simplex over free structural variables and
/// one slack per row. Phase 1 minimizes the sum of bound violations of the
/// basic variables, so any starting basis (including a warm start from a
/// previous program) is acceptable. Dantzig pricing; Bland's rule after too
/// many consecutive degenerate pivots.
LpOutcome run_simplex(const LinearProgram& lp, const SimplexOptions& options,
                      const SimplexBasis* warm);

}  // namespace kreach::detail
