#pragma once

#include <limits>
#include <vector>

#include "hqsim/arrival.hpp"
#include "hqsim/policy.hpp"

namespace hqsim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Log moment generating function log E[e^{theta X}] of a light arrival law.
// Returns +inf at and beyond the finiteness boundary theta_max.
double log_mgf(const ArrivalSpec& spec, double theta);
double theta_max(const ArrivalSpec& spec);

// Legendre transform sup_{theta >= 0} (theta*x - log_mgf(theta)), found by
// ternary search on the concave objective; +inf when the supremum diverges
// (x above the top of the support).
double legendre(const ArrivalSpec& spec, double x);

// Closed form for Poisson, used as an independent cross-check of legendre.
double legendre_poisson_closed(double rate, double x);

// Decay rate of the queue tail that the light stream can sustain on its own:
//   sup form   sup{theta > 0 : log_mgf(theta) - theta < 0}
//   inf form   inf_{a > 0} legendre(1+a) / a
// Both are computed and must agree; +inf when the law never overflows at
// exponential scale (e.g. Bernoulli with p < 1). Infinity is the IEEE value,
// kept distinct from any finite estimate.
struct ExponentResult {
    double value = kInf;
    double sup_form = kInf;
    double inf_form = kInf;
    bool light() const { return value == kInf; }
};
ExponentResult intrinsic_exponent(const ArrivalSpec& light);

// Stationary tail exponents implied by the service policy when the heavy
// stream's burst CCDF has power-law index heavy_index (> 1):
//   q_h is insensitive: one order heavier than the burst law everywhere.
//   q_l under max-weight depends only on the exponent ratio alpha_l/alpha_h;
//   priority-H is the ratio->0 limit. +inf marks a light (at most
//   exponential) tail: priority-L and log-max-weight.
struct TailPrediction {
    double q_h_coefficient = 0.0;
    double q_l_coefficient = 0.0;
};
TailPrediction predict_tail_coefficient(const Policy& policy, double heavy_index);

// Large-deviations rate of q_l under log-max-weight:
// min(intrinsic exponent of the light law, heavy_index - 1).
double lmw_exponent(const ArrivalSpec& light, double heavy_index);

// Numerical lower/upper tail-order estimates -log ccdf(x) / log x over a
// window of a tabulated CCDF. Values far above any plausible power-law index
// flag the tail as effectively light.
struct OrderEstimate {
    double lower = 0.0;
    double upper = 0.0;
    bool effectively_light = false;
};
OrderEstimate order_diagnostic(const std::vector<double>& xs,
                               const std::vector<double>& ccdf,
                               double x_lo, double x_hi);

} // namespace hqsim
