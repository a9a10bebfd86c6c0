#pragma once

#include <cstdint>
#include <deque>

#include "hqsim/policy.hpp"

namespace hqsim {

// FIFO burst bookkeeping for the heavy queue. The head-of-line burst's
// residual counts packets still to serve; its age counts packets already
// served. Maintained only when a run asks for it.
struct HolTracker {
    std::deque<std::int64_t> bursts;
    std::int64_t residual = 0;
    std::int64_t age = 0;

    void on_arrival(std::int64_t burst) {
        if (residual == 0 && bursts.empty()) {
            residual = burst;
            age = 0;
        } else {
            bursts.push_back(burst);
        }
    }

    void on_service() {
        --residual;
        ++age;
        if (residual == 0 && !bursts.empty()) {
            residual = bursts.front();
            age = 0;
            bursts.pop_front();
        }
    }
};

struct SystemState {
    std::int64_t q_h = 0;
    std::int64_t q_l = 0;
    std::uint64_t slot = 0;
    bool track_hol = false;
    HolTracker hol;
};

// Post-arrival observables of one slot. Queue statistics are sampled here,
// between arrivals and service: that is the decision point, and it is the
// convention under which the busy fraction P{q_h > 0} equals the service
// fraction (hence the heavy arrival rate, by flow balance).
struct StepRecord {
    std::int64_t q_h = 0;
    std::int64_t q_l = 0;
    Action action = Action::Idle;
    std::int64_t hol_residual = 0;
    std::int64_t hol_age = 0;
};

// One slot: add arrivals, decide on the post-arrival lengths, serve one
// packet from the chosen queue. The state left behind is the end-of-slot
// (post-service) state.
StepRecord step(SystemState& s, const Policy& policy, std::int64_t arr_h,
                std::int64_t arr_l);

// The real system coupled with the fictitious one driven by the same
// arrivals: fict serves H every slot it is nonempty and additionally serves
// L whenever the policy's weight comparison favors L (both can be served in
// one slot). The fictitious light queue never exceeds the real one; a
// violation means a bug, so it is counted on every step.
struct CoupledState {
    SystemState actual;
    SystemState fict;
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
};

void coupled_step(CoupledState& c, const Policy& policy, std::int64_t arr_h,
                  std::int64_t arr_l);

// Advances only the fictitious system; coupled_step and the simulator share
// this so their dynamics cannot drift apart.
void fict_step(SystemState& f, const Policy& policy, std::int64_t arr_h,
               std::int64_t arr_l);

} // namespace hqsim
