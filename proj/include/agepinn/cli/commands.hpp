#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace agepinn::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3, kIo = 4 };

// Runs one command line (without the program name). Diagnostics go to `err`
// as a single line; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace agepinn::cli
