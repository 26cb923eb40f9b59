#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mmcurv {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitResidualFailure = 1,
  kExitHypothesisUnmet = 2,
  kExitConfigError = 3,
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace mmcurv
