#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace anharmonic::cli {

enum ExitCode : int { kOk = 0, kInvalidFlags = 1, kCertificationFailure = 2 };

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics, trace lines and structured errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace anharmonic::cli
