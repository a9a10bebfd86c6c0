#include "hqsim/policy.hpp"

#include <algorithm>
#include <cmath>

namespace hqsim {

namespace {

// log(q) for the max-weight comparison; small arguments dominate the slot
// loop so they come from a table.
constexpr std::size_t kLogTableSize = 4097;

const double* log_table() {
    static const auto table = [] {
        static double t[kLogTableSize];
        t[0] = 0.0;
        for (std::size_t i = 1; i < kLogTableSize; ++i)
            t[i] = std::log(static_cast<double>(i));
        return +t;
    }();
    return table;
}

inline double log_q(std::int64_t q) {
    if (q < static_cast<std::int64_t>(kLogTableSize))
        return log_table()[static_cast<std::size_t>(q)];
    return std::log(static_cast<double>(q));
}

} // namespace

bool l_wins(const Policy& policy, std::int64_t q_h, std::int64_t q_l) {
    if (q_l <= 0) return q_h <= 0;
    if (q_h <= 0) return true;
    if (policy.kind == PolicyKind::LogMaxWeight)
        return static_cast<double>(q_l) >= std::log1p(static_cast<double>(q_h));
    double wl = policy.alpha_l * log_q(q_l);
    double wh = policy.alpha_h * log_q(q_h);
    double tol = 1e-12 * std::max(std::abs(wl), std::abs(wh));
    return wl - wh >= -tol;
}

Action decide(const Policy& policy, std::int64_t q_h, std::int64_t q_l) {
    const bool h_empty = q_h <= 0;
    const bool l_empty = q_l <= 0;
    if (h_empty && l_empty) return Action::Idle;

    switch (policy.kind) {
    case PolicyKind::PriorityH:
        return h_empty ? Action::ServeL : Action::ServeH;
    case PolicyKind::PriorityL:
        return l_empty ? Action::ServeH : Action::ServeL;
    case PolicyKind::MaxWeightAlpha:
    case PolicyKind::LogMaxWeight:
        if (l_empty) return Action::ServeH;
        if (h_empty) return Action::ServeL;
        return l_wins(policy, q_h, q_l) ? Action::ServeL : Action::ServeH;
    }
    return Action::Idle;
}

std::string policy_name(const Policy& policy) {
    switch (policy.kind) {
    case PolicyKind::PriorityH: return "priority_h";
    case PolicyKind::PriorityL: return "priority_l";
    case PolicyKind::MaxWeightAlpha: return "max_weight_alpha";
    case PolicyKind::LogMaxWeight: return "log_max_weight";
    }
    return "unknown";
}

} // namespace hqsim
