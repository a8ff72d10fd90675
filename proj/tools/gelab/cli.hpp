#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gelab::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kAnalysisError = 3,
  kIngestError = 4,
};

/// Runs the command line `args` (without the program name). Normal output goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gelab::cli
