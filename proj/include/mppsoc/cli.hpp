#pragma once

#include <ostream>

namespace mppsoc::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitSimulation = 3;

// Entry point of the mppsocgen tool: validate | generate | simulate | report.
// Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mppsoc::cli
