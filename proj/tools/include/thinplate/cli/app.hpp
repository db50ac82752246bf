#pragma once

#include <ostream>

namespace thinplate::cli {

enum ExitCode : int { kOk = 0, kInvalidInput = 1, kNumericalFailure = 2 };

/// Entry point of the thinplate tool. Parses argv, runs one subcommand and
/// returns its exit code; human-readable summaries go to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace thinplate::cli
