#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scp::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kRuntime = 3 };

/// Entry point behind the `scp` binary. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scp::cli
