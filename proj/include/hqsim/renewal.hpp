#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hqsim/arrival.hpp"
#include "hqsim/rng.hpp"

namespace hqsim {

// Stationary renewal quantities for a positive interval law H+ given as a
// pmf on {1..n_max}. All tables come from the same arithmetic:
//   P{H_R = k, H_A = l} = P{H+ = k+l} / E[H+]        (k >= 1, l >= 0)
// with residual/age/duration as its marginals and size-biased projection.
// The residual is one order heavier than H+ because its pmf is a tail sum.
struct RenewalTables {
    Pmf plus;                      // interval law, plus.p[0] == 0
    double mean_plus = 0.0;
    std::vector<double> ccdf_ge;   // ccdf_ge[k] = P{H+ >= k}, k in 0..n_max+1
    std::vector<double> residual;  // residual[k] = P{H_R = k}, k in 0..n_max (0 impossible)
    std::vector<double> age;       // age[l] = P{H_A = l}, l in 0..n_max
    std::vector<double> duration;  // duration[k] = P{H_D = k}, size-biased interval

    double joint(std::int64_t k, std::int64_t l) const; // P{H_R=k, H_A=l}
    double residual_ccdf(std::int64_t n) const;         // P{H_R > n}
    double joint_tail(std::int64_t m, std::int64_t n) const; // P{H_R>=m, H_A>=n}

    std::vector<double> residual_ccdf_; // suffix sums of residual
};

RenewalTables renewal_tables(const Pmf& plus);

// One stationary (residual, age) pair: duration draw split uniformly.
std::pair<std::int64_t, std::int64_t> sample_residual_age(const RenewalTables& t,
                                                          RngStream& rng);

} // namespace hqsim
