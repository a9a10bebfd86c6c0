#include "hqsim/system.hpp"

#include <cmath>
#include <stdexcept>

namespace hqsim {

StepRecord step(SystemState& s, const Policy& policy, std::int64_t arr_h,
                std::int64_t arr_l) {
    if (arr_h < 0 || arr_l < 0) throw std::invalid_argument("step: negative arrivals");

    s.q_h += arr_h;
    s.q_l += arr_l;
    if (s.track_hol && arr_h > 0) s.hol.on_arrival(arr_h);

    StepRecord rec;
    rec.q_h = s.q_h;
    rec.q_l = s.q_l;
    if (s.track_hol) {
        rec.hol_residual = s.hol.residual;
        rec.hol_age = s.hol.age;
    }

    rec.action = decide(policy, s.q_h, s.q_l);
    switch (rec.action) {
    case Action::ServeH:
        --s.q_h;
        if (s.track_hol) s.hol.on_service();
        break;
    case Action::ServeL:
        --s.q_l;
        break;
    case Action::Idle:
        break;
    }
    ++s.slot;
    return rec;
}

void fict_step(SystemState& f, const Policy& policy, std::int64_t arr_h,
               std::int64_t arr_l) {
    f.q_h += arr_h;
    f.q_l += arr_l;
    if (f.track_hol && arr_h > 0) f.hol.on_arrival(arr_h);

    // H served unconditionally; L served iff the post-arrival comparison
    // favors it. Both may be served in the same slot.
    if (l_wins(policy, f.q_h, f.q_l) && f.q_l > 0) --f.q_l;
    if (f.q_h > 0) {
        --f.q_h;
        if (f.track_hol) f.hol.on_service();
    }
    ++f.slot;
}

void coupled_step(CoupledState& c, const Policy& policy, std::int64_t arr_h,
                  std::int64_t arr_l) {
    if (policy.kind != PolicyKind::MaxWeightAlpha
        && policy.kind != PolicyKind::LogMaxWeight)
        throw std::invalid_argument(
            "coupled run: policy must be max_weight_alpha or log_max_weight");
    step(c.actual, policy, arr_h, arr_l);
    fict_step(c.fict, policy, arr_h, arr_l);
    ++c.checked;
    if (c.fict.q_l > c.actual.q_l) ++c.violations;
}

} // namespace hqsim
