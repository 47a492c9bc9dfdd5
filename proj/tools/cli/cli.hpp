#ifndef RELAY_CLI_CLI_HPP
#define RELAY_CLI_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace relay::cli {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Runs the tool on `args` (args[0] is the program name). Reports go to
/// `out`; errors go to `err` as a single line prefixed "error:".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relay::cli

#endif  // RELAY_CLI_CLI_HPP
