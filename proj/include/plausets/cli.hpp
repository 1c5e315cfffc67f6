#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plausets {

/// Exit codes of the command-line front-end.
enum ExitCode : int { kExitOk = 0, kExitDomain = 2, kExitConvergence = 3 };

/// Runs the `plausets` command line with argv-style arguments (args[0] is the
/// program name). Regular output goes to `out`, diagnostics and usage to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plausets
