// Acceptance suite: runs every pinned criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exits nonzero when any fails.

#include <cstdio>
#include <iostream>

#include "kmd/selfcheck.hpp"

int main() {
    auto results = kmd::selfcheck::acceptance_criteria();
    bool all = true;
    for (const auto& r : results) {
        std::printf("%s  criterion %-60s  (%.2fs)%s%s\n", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.seconds, r.detail.empty() ? "" : "  ",
                    r.detail.c_str());
        all = all && r.pass;
    }
    std::printf("%s: %zu/%zu criteria passed\n", all ? "OK" : "FAILURE",
                (size_t)std::count_if(results.begin(), results.end(),
                                      [](const auto& r) { return r.pass; }),
                results.size());
    return all ? 0 : 1;
}
