#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gpoly {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitUsage = 2,
  kExitRuntime = 3,
};

/// Runs the command-line tool on `args` (without the program name). Primary
/// output goes to `out`; diagnostics, provenance and errors go to `err`.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace gpoly
