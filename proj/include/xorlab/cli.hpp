#pragma once

#include <ostream>

namespace xorlab::cli {

enum ExitCode : int {
  kPass = 0,
  kFailure = 1,
  kUsage = 2,
  kNonConvergence = 3,
};

// Entry point of the `xorlab` tool. Reports go to `out` (or the --out file),
// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xorlab::cli
