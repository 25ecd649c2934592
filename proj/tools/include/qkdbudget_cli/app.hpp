#pragma once

#include <iosfwd>

namespace qkdbudget::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfig = 2,
  kExitInfeasible = 3,
  kExitIo = 4,
};

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qkdbudget::cli
