#pragma once

#include <ostream>
#include <stdexcept>
#include <string_view>

namespace qmoney::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitRuntimeError = 1,
  kExitUsageError = 2,
  kExitInvariantFailure = 3,
};

inline constexpr std::string_view kSchemaVersion = "qmoney-report/1";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Invalid parameters detected after argument parsing.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Parses the command line, runs the selected driver and emits its report.
/// Returns 0 iff every asserted invariant passed, kExitUsageError for invalid
/// parameters and kExitInvariantFailure when an invariant check fails.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qmoney::cli
