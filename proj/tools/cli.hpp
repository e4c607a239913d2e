#pragma once

#include <iosfwd>

namespace maxrep {

enum ExitCode : int {
  kExitOk = 0,
  kExitViolation = 1,
  kExitUsage = 2,
  kExitCapability = 3,
};

// Entry point of the `maxrep` executable. Output path "-" writes to `out`;
// diagnostics and, in that case, the resolved configuration go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace maxrep
