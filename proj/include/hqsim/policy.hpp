#pragma once

#include <cstdint>
#include <string>

namespace hqsim {

enum class PolicyKind { PriorityH, PriorityL, MaxWeightAlpha, LogMaxWeight };

struct Policy {
    PolicyKind kind = PolicyKind::PriorityH;
    double alpha_h = 1.0; // max-weight exponents; ignored by the other kinds
    double alpha_l = 1.0;

    friend bool operator==(const Policy&, const Policy&) = default;
};

enum class Action { Idle, ServeH, ServeL };

// One service decision from post-arrival queue lengths. Non-idling: Idle
// only when both queues are empty. Max-weight compares alpha_l*log(q_l)
// against alpha_h*log(q_h) (empty queue = -inf); ties within relative 1e-12
// go to L, which makes the decision exactly invariant under scaling both
// alphas by a common factor. Log-max-weight serves L iff q_l >= log(1+q_h).
Action decide(const Policy& policy, std::int64_t q_h, std::int64_t q_l);

// The weight comparison behind max-weight and log-max-weight decisions:
// true when L wins or ties. Exposed so the fictitious coupled system applies
// the exact same float arithmetic as decide().
bool l_wins(const Policy& policy, std::int64_t q_h, std::int64_t q_l);

std::string policy_name(const Policy& policy);

} // namespace hqsim
