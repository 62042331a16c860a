#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ionsim {

struct SelftestOptions {
    std::vector<int> n_max_values = {4, 12, 30};
    // Test fixture: negate one closed-form matrix entry before the first
    // oracle comparison so the detection path itself can be exercised.
    bool inject_closed_form_sign_flip = false;
};

struct SelftestCheck {
    std::string name;
    bool passed = false;
    double worst = 0.0;     // worst observed deviation
    double tolerance = 0.0;
    std::string detail;
};

struct SelftestResult {
    std::vector<SelftestCheck> checks;
    bool all_passed = false;
};

// Oracle-equivalence, unitarity, excitation-conservation, group-law,
// balanced-pair entropy, and measurement probability-sum suites.
SelftestResult run_selftest(const SelftestOptions& opts = {});

// Pass/fail table with the worst deviation per suite; names the first
// failing suite at the bottom.
void print_selftest(const SelftestResult& result, std::ostream& os);

} // namespace ionsim
