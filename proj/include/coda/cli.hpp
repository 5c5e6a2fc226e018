#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "coda/error.hpp"

namespace coda::cli {

// Exit statuses shared by every subcommand.
enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kDomainError = 2,
    kNumericalError = 3,
};

int exit_code_for(ErrorCode code);

// Runs the `coda` command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace coda::cli
