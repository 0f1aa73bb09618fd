#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace locc::cli {

/// Run the command-line interface on the given arguments (without the program
/// name). Returns the process exit code: 0 on success / affirmative answers,
/// 1 on invalid input or unknown flags, 2 when a check ran cleanly but
/// answered "no" (verification failed, bound violated, search exhausted).
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace locc::cli
