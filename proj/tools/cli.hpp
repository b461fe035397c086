#pragma once

#include <ostream>

namespace blochgen::cli {

/// Exit codes of the command-line tool.
enum Exit : int {
  kOk = 0,
  kInvalid = 1,  // diagram failed validation
  kInput = 2,    // unreadable or malformed input, bad usage
  kRuntime = 3,  // solver or code generation failure
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace blochgen::cli
