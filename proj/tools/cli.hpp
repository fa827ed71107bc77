#ifndef FLUIDLIM_TOOLS_CLI_HPP
#define FLUIDLIM_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fluidlim::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kIo = 3, kInvariant = 4 };

/// Entry point of the fluidlim tool; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fluidlim::cli

#endif  // FLUIDLIM_TOOLS_CLI_HPP
