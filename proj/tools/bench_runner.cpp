#include <chrono>
#include <cstdint>
#include <iostream>

#include <CLI11.hpp>

#include "hqsim/config.hpp"
#include "hqsim/runner.hpp"
#include "hqsim/threads.hpp"

using namespace hqsim;

namespace {

bool same_hist(const CcdfHistogram& a, const CcdfHistogram& b) {
    if (a.total() != b.total()) return false;
    const auto ca = a.curve(), cb = b.curve();
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i)
        if (ca[i].b != cb[i].b || ca[i].count_ge != cb[i].count_ge) return false;
    return true;
}

// bitwise equality: doubles included, since both paths must merge
// replications in the same order
bool identical(const SimResult& a, const SimResult& b) {
    return a.slots == b.slots && a.measured == b.measured && a.busy_h == b.busy_h
           && a.busy_l == b.busy_l && a.served_h == b.served_h
           && a.served_l == b.served_l && a.arrived_h == b.arrived_h
           && a.arrived_l == b.arrived_l && a.sum_qh == b.sum_qh
           && a.sum_ql == b.sum_ql && a.sum_qh_first == b.sum_qh_first
           && a.sum_ql_first == b.sum_ql_first && a.sum_qh_second == b.sum_qh_second
           && a.sum_ql_second == b.sum_ql_second
           && a.measured_first == b.measured_first
           && a.measured_second == b.measured_second && same_hist(a.hist_h, b.hist_h)
           && same_hist(a.hist_l, b.hist_l);
}

double seconds_of(std::chrono::steady_clock::duration d) {
    return std::chrono::duration<double>(d).count();
}

} // namespace

int main(int argc, char** argv) {
    std::uint64_t slots = 2000000;
    std::uint64_t reps = 8;
    std::uint64_t seed = 1;
    CLI::App app{"replication fan-out benchmark: serial vs worker-pool, "
                 "results must be bit-identical"};
    app.add_option("--slots", slots, "slots per replication");
    app.add_option("--replications", reps, "replication count");
    app.add_option("--seed", seed, "base seed");
    CLI11_PARSE(app, argc, argv);

    ExperimentConfig cfg;
    cfg.light = ArrivalSpec{Poisson{0.5}};
    cfg.heavy = ArrivalSpec{DiscretePareto{2.5, 0.25 / zeta_fn(2.5)}};
    cfg.policy = Policy{PolicyKind::MaxWeightAlpha, 1.0, 1.0};
    cfg.slots = slots;
    cfg.replications = static_cast<std::uint32_t>(reps);
    cfg.seed = seed;
    validate_config(cfg);

    const double total_slots = static_cast<double>(slots) * static_cast<double>(reps);
    std::cout << "workload: " << reps << " replications x " << slots
              << " slots, max-weight(1,1), poisson(0.5) + pareto(2.5)\n"
              << "worker pool: " << worker_count()
              << " (cap with HQSIM_THREADS)\n\n";

    auto t0 = std::chrono::steady_clock::now();
    const SimResult serial = run_replications(cfg, ExecMode::Serial);
    auto t1 = std::chrono::steady_clock::now();
    const SimResult parallel = run_replications(cfg, ExecMode::Parallel);
    auto t2 = std::chrono::steady_clock::now();

    const double ts = seconds_of(t1 - t0), tp = seconds_of(t2 - t1);
    std::cout << "serial    " << ts << " s   " << total_slots / ts / 1e6
              << " Mslots/s\n"
              << "parallel  " << tp << " s   " << total_slots / tp / 1e6
              << " Mslots/s\n"
              << "speedup   " << ts / tp << "x\n";

    const bool same = identical(serial, parallel);
    std::cout << "results bit-identical: " << (same ? "yes" : "NO") << '\n';
    return same ? 0 : 1;
}
