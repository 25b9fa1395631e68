#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qrgrad::cli {

enum ExitCode : int { kPass = 0, kViolation = 1, kUsage = 2 };

/// Runs one invocation. `args` excludes the program name. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qrgrad::cli
