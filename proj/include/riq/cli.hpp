#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace riq {

/// Exit codes shared by every subcommand.
inline constexpr int kExitProved = 0;
inline constexpr int kExitRefuted = 1;
inline constexpr int kExitUnknown = 2;
inline constexpr int kExitError = 3;

/// Runs the command line `args` (program name excluded).
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace riq
