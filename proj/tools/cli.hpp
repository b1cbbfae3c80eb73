#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "secomp/error.hpp"

namespace secomp::cli {

// Exit codes. analyze: 0 securely computable, 1 not, 2 boundary or bound
// only. Other commands exit 0 on success.
enum ExitCode : int {
  kExitOk = 0,
  kExitNotComputable = 1,
  kExitUndecided = 2,
  kExitParse = 10,
  kExitInvalidSpec = 11,
  kExitCap = 12,
  kExitNumerical = 13,
  kExitInternal = 14,
  kExitUsage = 15,
};

int exit_code_for(ErrorCode code);

// Full command line, argv[0] included. Reports go to `out`, diagnostics to
// `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace secomp::cli
