#pragma once

#include <string>
#include <vector>

namespace mmo::cli {

/// Exit codes of the `mmo` tool.
enum ExitCode : int { kSuccess = 0, kFailure = 1, kUsage = 2 };

/// Parses and runs one command line (args[0] is the program name).
int run(const std::vector<std::string>& args);

}  // namespace mmo::cli
