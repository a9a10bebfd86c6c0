#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "hqsim/arrival.hpp"
#include "hqsim/policy.hpp"

namespace hqsim {

// Parse or semantic-validation failure; the message names the offending key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fit windows for the post-run estimators. tail_q_* bound the CCDF quantile
// window of the power-law fit; ld_b_hi = 0 means "deepest level with enough
// samples".
struct EstimatorSettings {
    double tail_q_hi = 1e-2;
    double tail_q_lo = 1e-5;
    double ld_b_lo = 5.0;
    double ld_b_hi = 0.0;

    friend bool operator==(const EstimatorSettings&, const EstimatorSettings&) = default;
};

// burn_in sentinel: resolve to 10% of slots, capped at 1e6.
inline constexpr std::uint64_t kBurnInAuto = ~std::uint64_t{0};

struct ExperimentConfig {
    ArrivalSpec light{Poisson{0.5}};
    ArrivalSpec heavy{DiscretePareto{2.5, 0.25 / 1.3414872572509176}};
    Policy policy{};
    std::uint64_t slots = 1000000;
    std::uint64_t burn_in = kBurnInAuto;
    std::uint64_t seed = 1;
    std::uint32_t replications = 1;
    std::int64_t direct_cap = 4096;
    EstimatorSettings estimator{};
    std::string out_dir; // empty: write nothing

    std::uint64_t effective_burn_in() const {
        if (burn_in != kBurnInAuto) return burn_in;
        std::uint64_t b = slots / 10;
        return b < 1000000 ? b : 1000000;
    }
};

// Deep structural equality (SlowVaryModulated compares the pointed-to base).
bool spec_equal(const ArrivalSpec& a, const ArrivalSpec& b);
bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
inline bool operator!=(const ExperimentConfig& a, const ExperimentConfig& b) {
    return !(a == b);
}

// Flat key-value text: one "section.key = value" per line, '#' comments.
// Numbers use exact decimal strings; parse(serialize(c)) == c.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& c);

// Semantic checks (parameter ranges, light tail class, stability, windows).
// Throws ConfigError naming the field.
void validate_config(const ExperimentConfig& c);

// Shortest decimal string that round-trips the exact double.
std::string format_double(double v);

} // namespace hqsim
