#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tripart::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,      // bad flags, contract violations, I/O and parse errors
  kAlgorithm = 3,  // typed reconstruction failure
};

// Entry point for the `tripart` tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tripart::cli
