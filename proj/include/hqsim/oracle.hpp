#pragma once

#include <cstdint>
#include <vector>

#include "hqsim/arrival.hpp"
#include "hqsim/policy.hpp"
#include "hqsim/renewal.hpp"

namespace hqsim {

// Stationary law of the two queues on the truncated grid [0,cap]^2, found by
// power iteration on the exact one-slot kernel (arrivals folded at the cap,
// then one service). Small bounded-support configs only; this is the
// independent ground truth the simulator is compared against.
struct StationaryResult {
    std::int64_t cap = 0;
    std::vector<double> pi;          // end-of-slot law, index h*(cap+1)+l
    std::vector<double> marginal_h;  // post-arrival marginals, cap-folded
    std::vector<double> marginal_l;
    double busy_h = 0.0;             // post-arrival P{q > 0}
    double busy_l = 0.0;
    double folded_mass = 0.0;        // stationary arrival mass folded at cap
    double residual_l1 = 0.0;        // ||pi P - pi||_1 at convergence
    int iterations = 0;
    bool usable = false;             // folded mass within the requested bound
};

StationaryResult stationary_distribution(const ArrivalSpec& light,
                                         const ArrivalSpec& heavy,
                                         const Policy& policy, std::int64_t cap,
                                         double fold_bound = 1e-6,
                                         double tol = 1e-12,
                                         int max_iterations = 1000000);

// Time-averaged joint law of (residual, age) of a renewal process walked
// deterministically in expectation to the horizon: renewal-density
// convolution, no sampling. Agrees with renewal_tables up to O(1/horizon).
struct RenewalEnumeration {
    std::vector<double> residual; // residual[k] ~= P{H_R = k}
    std::vector<double> age;      // age[l]     ~= P{H_A = l}
    double joint(std::int64_t k, std::int64_t l) const;

    std::vector<double> u_avg; // C(T-1-l)/T, time-averaged renewal density
    std::vector<double> pmf;   // interval law the walk used
};

RenewalEnumeration renewal_enumeration(const Pmf& plus, std::uint64_t horizon);

// Monte Carlo check that a geometrically growing sum of light increments
// inherits the count's power tail: ratio P{sum > b} / P{count > b/E[X]}
// tabulated on a grid of b.
struct RandomSumTrend {
    std::vector<std::int64_t> b;
    std::vector<double> p_sum;   // P{S_N > b}
    std::vector<double> p_count; // P{N > b / E[X]}
    std::vector<double> ratio;
    std::uint64_t replicates = 0;
};

RandomSumTrend random_sum_trend(const ArrivalSpec& count_law,
                                const ArrivalSpec& increment_law,
                                const std::vector<std::int64_t>& b_grid,
                                std::uint64_t replicates, std::uint64_t seed,
                                bool parallel = true);

} // namespace hqsim
