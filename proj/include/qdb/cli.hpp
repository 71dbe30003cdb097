#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qdb::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kStrategyError = 3,
    kResourceCap = 4,
    kInvariantFailure = 5,
};

struct Check {
    std::string name;
    double value;
    double threshold;
    bool pass;
};

/// Invariant suite behind `demo grover|mixing|ecc`; throws DomainError for
/// any other name.
std::vector<Check> demo_checks(const std::string& name, unsigned long long seed);

/// Entry point of the qdb executable. Reports go to `out` (or to --out),
/// diagnostics and timing to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdb::cli
