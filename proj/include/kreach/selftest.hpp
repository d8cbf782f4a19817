#pragma once

#include <cstdint>
#include <ostream>

namespace kreach {

/// Runs a quick seeded property suite and the oscillator end to end, writing
/// one line per check to `log`. Returns the number of failed checks.
int run_selftest(std::uint64_t seed, std::ostream& log);

}  // namespace kreach
