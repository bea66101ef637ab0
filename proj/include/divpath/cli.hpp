#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace divpath {

/// Exit statuses of the command-line tool.
enum ExitCode { kExitOk = 0, kExitUsage = 2, kExitSolver = 3, kExitStuck = 4, kExitMaxSteps = 5 };

/// Runs the command-line tool. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace divpath
