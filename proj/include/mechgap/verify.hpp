#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mechgap/tolerance.hpp"

namespace mechgap {

/// One verification check: pass iff measured lies in [lo, hi].
struct CheckResult {
    int criterion = 0;  // acceptance criterion number, 1-10
    std::string name;
    double measured = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool pass = false;
    std::string note;  // optional context (measured-only diagnostics)
};

struct VerifyOptions {
    std::uint64_t seed = 0;
    ToleranceConfig cfg{};
    bool quick = false;  // reduced scales for unit-test runs
};

/// Suites: "spm-ap" (criteria 1, 5), "ar-ap" (2, 3, 4, 6),
/// "opt-ar" (7, 8, 9), "properties" (10), or "all".
std::vector<CheckResult> run_verification(const std::string& suite,
                                          const VerifyOptions& opts = {});

/// Tabular report, one line per check plus per-criterion rollups.
/// Returns true iff every check passed.
bool print_verification(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace mechgap
