#pragma once

#include <iosfwd>

namespace stefan1d::cli {

/// Process exit codes. Stable: scripts depend on them.
enum ExitCode : int {
    kOk = 0,
    kParseError = 1,        // bad flags, malformed JSON, schema violations
    kDomainError = 2,       // inadmissible or infeasible input
    kVerificationError = 3, // a certificate failed
    kIncomplete = 4,        // simulation hit t_max with walkers still active
    kReproFailure = 5,      // at least one repro scenario failed
};

/// Entry point shared by the executable and the tests. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace stefan1d::cli
