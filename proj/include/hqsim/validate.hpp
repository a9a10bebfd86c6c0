#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hqsim {

struct CheckResult {
    std::string name;
    std::string anchor; // the invariant the check pins down
    bool pass = false;
    std::string detail; // measured numbers and bounds
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_pass() const;
};

// Cross-module invariant suite: exact renewal identities, analytic
// cross-checks, coupling dominance, oracle equivalence, estimator recovery,
// and serialization round-trips. sim_slots scales the simulated checks;
// tolerances for those widen below 1e7 slots.
ValidationReport run_validation(std::uint64_t sim_slots = 1000000,
                                std::uint64_t seed = 1, bool parallel = true);

void print_report(const ValidationReport& r, std::ostream& os);

} // namespace hqsim
