#pragma once

#include <ostream>

#include "sideband/config.hpp"

namespace sideband {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitInvariantViolation = 2;

// Executes one experiment: writes its CSV trace(s) and prints a summary.
// Returns 0 on success, 1 on I/O or configuration problems, 2 when a numerical
// invariant (unitarity, ratio range, QNL floor) is violated.
int run(const RunConfig& config, std::ostream& summary, std::ostream& errors);

}  // namespace sideband
