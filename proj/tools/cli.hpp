#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gaussch::cli {

enum ExitCode { kOk = 0, kVerdictFailure = 1, kUsage = 2 };

/// Runs the command line `args` (without the program name). Output goes to
/// `out`, diagnostics and summaries to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gaussch::cli
