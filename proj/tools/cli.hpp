#pragma once

#include <string>
#include <vector>

namespace rra::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kFailure = 1, kValidation = 2, kNumericalCheck = 3 };

/// Runs the tool on argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args);

}  // namespace rra::cli
