#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dtmsig::cli {

enum ExitCode : int { ok = 0, invalid = 2, degenerate = 3 };

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless redirected with --out; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

}  // namespace dtmsig::cli
