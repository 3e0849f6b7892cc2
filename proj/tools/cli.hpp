#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mdd::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kDomainError = 3, kInternalError = 4 };

/// Runs the command line `args` (without the program name). Normal output
/// goes to `out`, diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mdd::cli
