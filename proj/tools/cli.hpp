#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qgs/error.hpp"

namespace qgs::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParse = 2,
  kConstraintBlowup = 3,
  kTimeout = 4,
  kNoSolutions = 5,
  kCapacity = 6,
};

int exit_code_for(ErrorKind kind) noexcept;

/// Runs the tool with `args` (excluding the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qgs::cli
