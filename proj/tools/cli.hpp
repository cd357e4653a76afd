#pragma once

#include <iosfwd>

namespace conc::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kConfigError = 2,
    kInfeasible = 3,
    kIoError = 4,
};

// Entry point of the `conc` tool; results go to `out` unless --out names a file.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace conc::cli
