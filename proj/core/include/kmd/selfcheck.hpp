#pragma once

#include <string>
#include <vector>

namespace kmd::selfcheck {

struct Result {
    std::string name;
    bool pass = false;
    std::string detail;  // failure diagnostics or timing note
    double seconds = 0.0;
};

/// the ten pinned acceptance criteria, in order
std::vector<Result> acceptance_criteria();

/// additional invariant suites run by the self-check command
std::vector<Result> invariant_corpus();

}  // namespace kmd::selfcheck
