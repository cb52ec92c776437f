#pragma once

#include <ostream>

namespace reallog::cli {

enum ExitCode : int {
  kOk = 0,
  kVerdictFalse = 1,
  kInputError = 2,
  kNumericalFailure = 3,
};

/// Parses argv, runs one subcommand, writes JSON to `out` and diagnostics to
/// `err`, and returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace reallog::cli
