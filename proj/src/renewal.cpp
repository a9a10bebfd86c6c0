#include "hqsim/renewal.hpp"

#include <algorithm>
#include <stdexcept>

namespace hqsim {

RenewalTables renewal_tables(const Pmf& plus) {
    const std::size_t n = plus.p.size();
    if (n < 2) throw std::invalid_argument("renewal_tables: empty interval law");
    if (plus.p[0] != 0.0)
        throw std::invalid_argument("renewal_tables: interval law must have no mass at 0");

    RenewalTables t;
    t.plus = plus;

    // suffix sums: ccdf_ge[k] = sum_{m>=k} p[m]; one extra slot so that
    // ccdf_ge[n_max+1] = 0 keeps age/residual loops branch-free. Compensated
    // so supports of 1e5+ entries stay identity-exact at the 1e-12 level.
    t.ccdf_ge.assign(n + 1, 0.0);
    {
        double s = 0.0, c = 0.0;
        for (std::size_t k = n; k-- > 0;) {
            const double y = plus.p[k] - c;
            const double v = s + y;
            c = (v - s) - y;
            s = v;
            t.ccdf_ge[k] = s;
        }
    }

    // E[H+] = sum_{k>=1} P{H+ >= k}
    double e = 0.0;
    {
        double c = 0.0;
        for (std::size_t k = 1; k < n; ++k) {
            const double y = t.ccdf_ge[k] - c;
            const double v = e + y;
            c = (v - e) - y;
            e = v;
        }
    }
    t.mean_plus = e;

    t.residual.assign(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) t.residual[k] = t.ccdf_ge[k] / e;

    t.age.assign(n, 0.0);
    for (std::size_t l = 0; l + 1 < n; ++l) t.age[l] = t.ccdf_ge[l + 1] / e;

    t.duration.assign(n, 0.0);
    for (std::size_t k = 1; k < n; ++k)
        t.duration[k] = static_cast<double>(k) * plus.p[k] / e;

    t.residual_ccdf_.assign(n + 1, 0.0);
    {
        double s = 0.0, c = 0.0;
        for (std::size_t k = n; k-- > 0;) {
            const double y = t.residual[k] - c;
            const double v = s + y;
            c = (v - s) - y;
            s = v;
            t.residual_ccdf_[k] = s;
        }
    }

    return t;
}

double RenewalTables::joint(std::int64_t k, std::int64_t l) const {
    if (k < 1 || l < 0) return 0.0;
    std::int64_t d = k + l;
    if (d >= static_cast<std::int64_t>(plus.p.size())) return 0.0;
    return plus.p[static_cast<std::size_t>(d)] / mean_plus;
}

double RenewalTables::residual_ccdf(std::int64_t n) const {
    if (n < 0) return 1.0;
    std::int64_t k = n + 1;
    if (k >= static_cast<std::int64_t>(residual_ccdf_.size())) return 0.0;
    return residual_ccdf_[static_cast<std::size_t>(k)];
}

double RenewalTables::joint_tail(std::int64_t m, std::int64_t n) const {
    // sum_{k>=m} sum_{l>=n} pmf(k+l)/E; equals P{H_R >= m+n} in exact
    // arithmetic, computed here by an independent route: duration d covers
    // d-s+1 cells of its diagonal, summed smallest-first with compensation.
    if (m < 1) m = 1;
    if (n < 0) n = 0;
    const std::int64_t s0 = m + n;
    const std::int64_t top = static_cast<std::int64_t>(plus.p.size()) - 1;
    double s = 0.0, c = 0.0;
    for (std::int64_t d = top; d >= s0; --d) {
        const double y =
            static_cast<double>(d - s0 + 1) * plus.p[static_cast<std::size_t>(d)] - c;
        const double v = s + y;
        c = (v - s) - y;
        s = v;
    }
    return s / mean_plus;
}

std::pair<std::int64_t, std::int64_t> sample_residual_age(const RenewalTables& t,
                                                          RngStream& rng) {
    // inverse-CDF draw of the size-biased duration, then a uniform split:
    // conditioned on duration d the (residual, age) pair is uniform on the d
    // cells {(k, d-k) : 1 <= k <= d}.
    double u = rng.next_unit();
    double cum = 0.0;
    std::int64_t d = 1;
    std::int64_t top = static_cast<std::int64_t>(t.duration.size()) - 1;
    for (; d < top; ++d) {
        cum += t.duration[static_cast<std::size_t>(d)];
        if (u < cum) break;
    }
    std::int64_t k = 1 + static_cast<std::int64_t>(rng.next_unit() * static_cast<double>(d));
    k = std::min(k, d);
    return {k, d - k};
}

} // namespace hqsim
