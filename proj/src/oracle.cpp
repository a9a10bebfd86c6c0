#include "hqsim/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "hqsim/rng.hpp"
#include "hqsim/threads.hpp"

namespace hqsim {

namespace {

struct Atom {
    std::int64_t v;
    double p;
};

std::vector<Atom> atoms_of(const ArrivalSpec& spec, const char* which) {
    std::int64_t top = max_support(spec);
    if (top < 0)
        throw std::invalid_argument(std::string("stationary_distribution: ") + which
                                    + " arrival law must have bounded support");
    std::vector<Atom> atoms;
    for (std::int64_t v = 0; v <= top; ++v) {
        double p = pmf_at(spec, v);
        if (p > 0.0) atoms.push_back({v, p});
    }
    return atoms;
}

} // namespace

StationaryResult stationary_distribution(const ArrivalSpec& light,
                                         const ArrivalSpec& heavy,
                                         const Policy& policy, std::int64_t cap,
                                         double fold_bound, double tol,
                                         int max_iterations) {
    if (cap < 1) throw std::invalid_argument("stationary_distribution: cap < 1");
    const auto atoms_l = atoms_of(light, "light");
    const auto atoms_h = atoms_of(heavy, "heavy");

    const std::size_t w = static_cast<std::size_t>(cap) + 1;
    const std::size_t n_states = w * w;
    std::vector<double> pi(n_states, 0.0), next(n_states, 0.0);
    pi[0] = 1.0;

    StationaryResult out;
    out.cap = cap;

    auto apply = [&](const std::vector<double>& src, std::vector<double>& dst) {
        std::fill(dst.begin(), dst.end(), 0.0);
        for (std::size_t idx = 0; idx < n_states; ++idx) {
            double mass = src[idx];
            if (mass == 0.0) continue;
            const std::int64_t h = static_cast<std::int64_t>(idx / w);
            const std::int64_t l = static_cast<std::int64_t>(idx % w);
            for (const auto& ah : atoms_h) {
                const std::int64_t h_arr = std::min(h + ah.v, cap);
                for (const auto& al : atoms_l) {
                    const std::int64_t l_arr = std::min(l + al.v, cap);
                    std::int64_t nh = h_arr, nl = l_arr;
                    switch (decide(policy, h_arr, l_arr)) {
                    case Action::ServeH: --nh; break;
                    case Action::ServeL: --nl; break;
                    case Action::Idle: break;
                    }
                    dst[static_cast<std::size_t>(nh) * w
                        + static_cast<std::size_t>(nl)] += mass * ah.p * al.p;
                }
            }
        }
    };

    double residual = 1.0;
    int it = 0;
    while (it < max_iterations) {
        apply(pi, next);
        ++it;
        residual = 0.0;
        for (std::size_t i = 0; i < n_states; ++i)
            residual += std::abs(next[i] - pi[i]);
        pi.swap(next);
        if (residual < tol) break;
    }
    out.iterations = it;
    out.residual_l1 = residual;
    out.pi = pi;

    // post-arrival marginals, fold probability, busy fractions
    out.marginal_h.assign(w, 0.0);
    out.marginal_l.assign(w, 0.0);
    double folded = 0.0;
    for (std::size_t idx = 0; idx < n_states; ++idx) {
        double mass = pi[idx];
        if (mass == 0.0) continue;
        const std::int64_t h = static_cast<std::int64_t>(idx / w);
        const std::int64_t l = static_cast<std::int64_t>(idx % w);
        // folded mass: probability the next arrival step would overshoot cap
        for (const auto& ah : atoms_h)
            for (const auto& al : atoms_l)
                if (h + ah.v > cap || l + al.v > cap) folded += mass * ah.p * al.p;
        // arrivals are independent across streams, so marginals factor
        for (const auto& ah : atoms_h)
            out.marginal_h[static_cast<std::size_t>(std::min(h + ah.v, cap))] += mass * ah.p;
        for (const auto& al : atoms_l)
            out.marginal_l[static_cast<std::size_t>(std::min(l + al.v, cap))] += mass * al.p;
    }
    out.folded_mass = folded;
    out.busy_h = 1.0 - out.marginal_h[0];
    out.busy_l = 1.0 - out.marginal_l[0];
    out.usable = residual < tol && folded <= fold_bound;
    return out;
}

RenewalEnumeration renewal_enumeration(const Pmf& plus, std::uint64_t horizon) {
    const std::int64_t n_max = plus.n_max();
    if (n_max < 1 || plus.p[0] != 0.0)
        throw std::invalid_argument("renewal_enumeration: need an interval law on {1..n}");
    if (horizon <= static_cast<std::uint64_t>(n_max))
        throw std::invalid_argument("renewal_enumeration: horizon too small");

    // u(t) = P{renewal at t} by convolution; C(t) = sum_{tau<=t} u(tau).
    // Ring buffers keep the last n_max+1 values of each.
    const std::size_t ring = static_cast<std::size_t>(n_max) + 1;
    std::vector<double> u_ring(ring, 0.0), c_ring(ring, 0.0);
    u_ring[0] = 1.0;
    c_ring[0] = 1.0;
    double cum = 1.0;
    for (std::uint64_t t = 1; t < horizon; ++t) {
        double u = 0.0;
        const std::int64_t smax = std::min<std::int64_t>(n_max, static_cast<std::int64_t>(t));
        for (std::int64_t s = 1; s <= smax; ++s)
            u += plus.p[static_cast<std::size_t>(s)]
                 * u_ring[(t - static_cast<std::uint64_t>(s)) % ring];
        u_ring[t % ring] = u;
        cum += u;
        c_ring[t % ring] = cum;
    }

    RenewalEnumeration out;
    out.pmf = plus.p;
    const double T = static_cast<double>(horizon);
    out.u_avg.assign(ring, 0.0);
    for (std::size_t l = 0; l < ring; ++l) {
        std::uint64_t t = horizon - 1 - static_cast<std::uint64_t>(l);
        out.u_avg[l] = c_ring[t % ring] / T;
    }

    out.residual.assign(ring, 0.0);
    for (std::int64_t k = 1; k <= n_max; ++k) {
        double s = 0.0;
        for (std::int64_t l = 0; k + l <= n_max; ++l)
            s += plus.p[static_cast<std::size_t>(k + l)] * out.u_avg[static_cast<std::size_t>(l)];
        out.residual[static_cast<std::size_t>(k)] = s;
    }
    out.age.assign(ring, 0.0);
    for (std::int64_t l = 0; l < n_max; ++l) {
        double tail = 0.0;
        for (std::int64_t m = l + 1; m <= n_max; ++m)
            tail += plus.p[static_cast<std::size_t>(m)];
        out.age[static_cast<std::size_t>(l)] = tail * out.u_avg[static_cast<std::size_t>(l)];
    }
    return out;
}

double RenewalEnumeration::joint(std::int64_t k, std::int64_t l) const {
    if (k < 1 || l < 0) return 0.0;
    std::int64_t d = k + l;
    if (d >= static_cast<std::int64_t>(pmf.size())) return 0.0;
    if (l >= static_cast<std::int64_t>(u_avg.size())) return 0.0;
    return pmf[static_cast<std::size_t>(d)] * u_avg[static_cast<std::size_t>(l)];
}

RandomSumTrend random_sum_trend(const ArrivalSpec& count_law,
                                const ArrivalSpec& increment_law,
                                const std::vector<std::int64_t>& b_grid,
                                std::uint64_t replicates, std::uint64_t seed,
                                bool parallel) {
    const double mu = mean(increment_law);
    if (!(mu > 0.0))
        throw std::invalid_argument("random_sum_trend: increment law needs positive mean");

    const std::size_t nb = b_grid.size();
    std::vector<std::uint64_t> cnt_sum(nb, 0), cnt_n(nb, 0);
    std::vector<std::int64_t> n_thresh(nb);
    for (std::size_t i = 0; i < nb; ++i)
        n_thresh[i] = static_cast<std::int64_t>(
            std::floor(static_cast<double>(b_grid[i]) / mu));

    const int workers = parallel ? worker_count() : 1;

#pragma omp parallel num_threads(workers)
    {
        std::vector<std::uint64_t> loc_sum(nb, 0), loc_n(nb, 0);
#pragma omp for schedule(static)
        for (std::int64_t r = 0; r < static_cast<std::int64_t>(replicates); ++r) {
            RngStream rng(seed, static_cast<std::uint64_t>(r));
            const std::int64_t n = sample(count_law, rng);
            std::int64_t s = 0;
            for (std::int64_t i = 0; i < n; ++i) s += sample(increment_law, rng);
            for (std::size_t i = 0; i < nb; ++i) {
                loc_sum[i] += s > b_grid[i];
                loc_n[i] += n > n_thresh[i];
            }
        }
#pragma omp critical
        for (std::size_t i = 0; i < nb; ++i) {
            cnt_sum[i] += loc_sum[i];
            cnt_n[i] += loc_n[i];
        }
    }

    RandomSumTrend out;
    out.b = b_grid;
    out.replicates = replicates;
    out.p_sum.resize(nb);
    out.p_count.resize(nb);
    out.ratio.resize(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        out.p_sum[i] = static_cast<double>(cnt_sum[i]) / static_cast<double>(replicates);
        out.p_count[i] = static_cast<double>(cnt_n[i]) / static_cast<double>(replicates);
        out.ratio[i] = out.p_count[i] > 0.0 ? out.p_sum[i] / out.p_count[i] : 0.0;
    }
    return out;
}

} // namespace hqsim
