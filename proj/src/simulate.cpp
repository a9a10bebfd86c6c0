#include "hqsim/simulate.hpp"

#include <stdexcept>

#include "hqsim/arrival_sampler.hpp"

namespace hqsim {

void SimResult::merge(const SimResult& other) {
    hist_h.merge(other.hist_h);
    hist_l.merge(other.hist_l);
    hol_residual.merge(other.hol_residual);
    hol_age.merge(other.hol_age);
    slots += other.slots;
    measured += other.measured;
    busy_h += other.busy_h;
    busy_l += other.busy_l;
    served_h += other.served_h;
    served_l += other.served_l;
    arrived_h += other.arrived_h;
    arrived_l += other.arrived_l;
    sum_qh += other.sum_qh;
    sum_ql += other.sum_ql;
    sum_qh_first += other.sum_qh_first;
    sum_ql_first += other.sum_ql_first;
    sum_qh_second += other.sum_qh_second;
    sum_ql_second += other.sum_ql_second;
    measured_first += other.measured_first;
    measured_second += other.measured_second;
    dominance_checked += other.dominance_checked;
    dominance_violations += other.dominance_violations;
    if (probes.empty()) {
        probes = other.probes;
    } else if (!other.probes.empty()) {
        // probes do not merge meaningfully across replications; keep the
        // first replication's trajectory
    }
}

SimResult simulate(const SimConfig& cfg) {
    if (cfg.burn_in >= cfg.slots && cfg.slots > 0)
        throw std::invalid_argument("simulate: burn_in must be below slots");
    if (cfg.coupled && cfg.policy.kind != PolicyKind::MaxWeightAlpha
        && cfg.policy.kind != PolicyKind::LogMaxWeight)
        throw std::invalid_argument(
            "simulate: coupled runs need max_weight_alpha or log_max_weight");

    RngStream rng_l(cfg.seed, 2 * cfg.replication);
    RngStream rng_h(cfg.seed, 2 * cfg.replication + 1);
    ArrivalSampler draw_l(cfg.light);
    ArrivalSampler draw_h(cfg.heavy);

    SimResult res;
    res.hist_h = CcdfHistogram(cfg.direct_cap);
    res.hist_l = CcdfHistogram(cfg.direct_cap);
    res.hol_residual = CcdfHistogram(cfg.direct_cap);
    res.hol_age = CcdfHistogram(cfg.direct_cap);
    for (double c : cfg.probe_exponents) res.probes.emplace_back(c);

    SystemState s;
    s.track_hol = cfg.track_hol;
    SystemState fict;

    const std::uint64_t half_point = cfg.burn_in + (cfg.slots - cfg.burn_in) / 2;
    const bool hol = cfg.track_hol;
    const bool coupled = cfg.coupled;
    const bool probing = !res.probes.empty();

    for (std::uint64_t t = 0; t < cfg.slots; ++t) {
        const std::int64_t al = draw_l.draw(rng_l);
        const std::int64_t ah = draw_h.draw(rng_h);

        s.q_h += ah;
        s.q_l += al;
        res.arrived_h += static_cast<std::uint64_t>(ah);
        res.arrived_l += static_cast<std::uint64_t>(al);
        if (hol && ah > 0) s.hol.on_arrival(ah);

        if (t >= cfg.burn_in) {
            ++res.measured;
            res.hist_h.add(s.q_h);
            res.hist_l.add(s.q_l);
            res.busy_h += s.q_h > 0;
            res.busy_l += s.q_l > 0;
            const double qh = static_cast<double>(s.q_h);
            const double ql = static_cast<double>(s.q_l);
            res.sum_qh += qh;
            res.sum_ql += ql;
            if (t < half_point) {
                res.sum_qh_first += qh;
                res.sum_ql_first += ql;
                ++res.measured_first;
            } else {
                res.sum_qh_second += qh;
                res.sum_ql_second += ql;
                ++res.measured_second;
            }
            if (hol && s.q_h > 0) {
                res.hol_residual.add(s.hol.residual);
                res.hol_age.add(s.hol.age);
            }
            if (probing)
                for (auto& probe : res.probes) probe.add(ql);
        }

        switch (decide(cfg.policy, s.q_h, s.q_l)) {
        case Action::ServeH:
            --s.q_h;
            ++res.served_h;
            if (hol) s.hol.on_service();
            break;
        case Action::ServeL:
            --s.q_l;
            ++res.served_l;
            break;
        case Action::Idle:
            break;
        }
        ++s.slot;

        if (coupled) {
            fict_step(fict, cfg.policy, ah, al);
            ++res.dominance_checked;
            res.dominance_violations += fict.q_l > s.q_l;
        }

        if ((t & 0xFFFFF) == 0 && (s.q_h > (std::int64_t{1} << 60)
                                   || s.q_l > (std::int64_t{1} << 60)))
            throw std::overflow_error("simulate: queue length overflow");
    }
    res.slots = cfg.slots;
    return res;
}

} // namespace hqsim
