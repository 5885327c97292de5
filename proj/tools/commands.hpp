#pragma once

#include <iosfwd>

namespace credal::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kInfeasibleEvidence = 3,
  kCapExceeded = 4,
};

// Runs one command line. Reports go to --output or `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace credal::cli
