#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rdsmc::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kPrecondition = 3,
  kNoCoalescence = 4,
};

/// Runs one command line (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rdsmc::cli
