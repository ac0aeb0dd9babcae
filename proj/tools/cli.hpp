#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace barotherm::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitDomainError = 2,
  kExitNonConvergence = 3,
};

/// Runs the command line `args` (program name excluded), writing normal output
/// to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace barotherm::cli
