#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tilab {

struct CheckResult {
    int number = 0;
    std::string id;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs the acceptance suite, one pass/fail line per criterion as it
// completes. quick restricts to the fast algebra/spectra tier.
std::vector<CheckResult> run_acceptance(bool quick, std::ostream& out);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace tilab
