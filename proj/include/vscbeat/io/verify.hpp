#pragma once

// Self-consistency suite: dense spectrum vs the polariton formulas, spectral
// identities, closed form vs direct integration, energy drift, time reversal,
// coordinate reconstruction and the beat-period estimator.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace vscbeat::io {

struct VerifyOptions {
    std::size_t n_molecules = 5;
    double omega_c = 1.0;
    double omega_d = 0.1;
    double velocity_scale = 0.3;
    unsigned long long seed = 1;
    int order = 6;
    bool quick = false; // one beat period instead of two, coarser identity grid
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string note;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

VerifyReport run_verification(const VerifyOptions& options);

/// One "PASS name value=.. tol=.." / "FAIL ..." line per check, then a summary line.
void print_report(std::ostream& out, const VerifyReport& report);

} // namespace vscbeat::io
