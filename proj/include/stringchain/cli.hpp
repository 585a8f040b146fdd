#pragma once

#include <iosfwd>

namespace stringchain {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitNumerical = 2,
  kExitUsage = 64,
  kExitConfig = 65,
};

/// Runs one subcommand. Results go to files under --out plus manifest.json;
/// a one-line summary goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stringchain
