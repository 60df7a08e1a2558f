#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cdkit {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitUsage = 2,
  kExitMaxIters = 3,
  kExitBreakdown = 4,
  kExitCheckFailed = 5,  ///< failed diagnostics or a trajectory too short for them
};

/// Runs one command; args excludes the program name. Artifacts without an
/// output path go to out, messages to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdkit
