#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nordenkit/errors.hpp"

namespace nk {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitPass = 0,
    kExitInvariantFailure = 1,
    kExitInputError = 2,
    kExitInconsistency = 3,
    kExitClassPrecondition = 4,
};

int exit_code_for(ErrorKind kind);

/// Runs one command; args exclude the program name. Reports go to `out`,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nk
