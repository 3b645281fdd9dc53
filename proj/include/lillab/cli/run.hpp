#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lillab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitUsage = 2,  // config file, flags or invalid input
  kExitUnknownName = 3,
  kExitNumerical = 4,
  kExitNonConvergence = 5,
  kExitIo = 6,
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace lillab::cli
