#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hdspc::cli {

enum ExitCode : int { Ok = 0, InputFailure = 2, NumericFailure = 3 };

/// Runs the command line `args` (args[0] is the program name) and returns
/// the process exit code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hdspc::cli
