#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace switchsim {

// One sub-check of an acceptance criterion.
struct CheckResult {
    int criterion = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AcceptanceReport {
    std::vector<CheckResult> checks;

    bool all_pass() const;
    bool criterion_pass(int criterion) const;
    // sub-check lines followed by one PASS/FAIL line per criterion
    std::string render() const;
};

// Runs the complete acceptance suite against the bundled paper-2014
// preset. Deterministic: fixed seeds throughout. `log`, when given,
// receives progress lines as criteria finish.
AcceptanceReport run_acceptance(std::ostream* log = nullptr);

} // namespace switchsim
