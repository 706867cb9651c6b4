#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracbvp {
class Error;
}

namespace fracbvp::cli {

enum ExitCode : int {
    kOk = 0,
    kIoError = 1,
    kConfigError = 2,
    kValidationFailed = 3,
    kDegenerateCone = 4,
    kNoSolution = 5,
};

/// Exit status for an error escaping a command.
int exit_code_for(const Error& e);

/// Runs `fracbvp <command> [flags]`; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracbvp::cli
