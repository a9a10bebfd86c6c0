#pragma once

#include <cstdint>
#include <vector>

#include "hqsim/arrival.hpp"
#include "hqsim/ccdf_histogram.hpp"
#include "hqsim/estimators.hpp"
#include "hqsim/policy.hpp"
#include "hqsim/system.hpp"

namespace hqsim {

struct SimConfig {
    ArrivalSpec light;
    ArrivalSpec heavy;
    Policy policy;
    std::uint64_t slots = 1000000;
    std::uint64_t burn_in = 0;  // slots discarded before measuring
    std::uint64_t seed = 1;
    std::uint64_t replication = 0; // selects the rng streams
    std::int64_t direct_cap = 4096;
    bool track_hol = false;
    bool coupled = false; // run the fictitious system alongside (mw/lmw only)
    std::vector<double> probe_exponents; // moment probes fed with q_l
};

// Counters and histograms from one replication (or a merge of several).
// Queue lengths are sampled post-arrival, at the decision point.
struct SimResult {
    CcdfHistogram hist_h{4096};
    CcdfHistogram hist_l{4096};
    CcdfHistogram hol_residual{4096};
    CcdfHistogram hol_age{4096};

    std::uint64_t slots = 0;    // slots run, including burn-in
    std::uint64_t measured = 0; // slots contributing to statistics
    std::uint64_t busy_h = 0;   // measured slots with q_h > 0 post-arrival
    std::uint64_t busy_l = 0;
    std::uint64_t served_h = 0; // over all slots
    std::uint64_t served_l = 0;
    std::uint64_t arrived_h = 0;
    std::uint64_t arrived_l = 0;

    double sum_qh = 0.0, sum_ql = 0.0;
    double sum_qh_first = 0.0, sum_ql_first = 0.0; // first half of measured window
    double sum_qh_second = 0.0, sum_ql_second = 0.0;
    std::uint64_t measured_first = 0, measured_second = 0;

    std::uint64_t dominance_checked = 0;
    std::uint64_t dominance_violations = 0;

    std::vector<MomentProbe> probes;

    double busy_fraction_h() const {
        return measured ? static_cast<double>(busy_h) / static_cast<double>(measured) : 0.0;
    }
    double busy_fraction_l() const {
        return measured ? static_cast<double>(busy_l) / static_cast<double>(measured) : 0.0;
    }
    double mean_qh() const {
        return measured ? sum_qh / static_cast<double>(measured) : 0.0;
    }
    double mean_ql() const {
        return measured ? sum_ql / static_cast<double>(measured) : 0.0;
    }

    // order-independent for the integer counters; doubles are added in call
    // order, so merging replications in index order is deterministic
    void merge(const SimResult& other);
};

SimResult simulate(const SimConfig& cfg);

} // namespace hqsim
