#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hopdim::cli {

/// Exit codes of the hopdim tool.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kDomain = 3,
  kStatistical = 4,
};

/// Runs the command line; args excludes the program name. Output that would
/// go to stdout/stderr is written to out/err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hopdim::cli
