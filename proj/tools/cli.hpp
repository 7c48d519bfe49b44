#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace estfid::cli {

/// Runs the command-line tool on the given arguments (program name excluded).
/// Writes data to `out` (unless redirected by --output) and diagnostics to
/// `err`; returns the process exit code (0 on success).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace estfid::cli
