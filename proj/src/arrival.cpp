#include "hqsim/arrival.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hqsim {

namespace {

double geometric_p(const GeometricBatch& g) { return g.mean / (1.0 + g.mean); }

struct SlowVaryTable {
    std::vector<double> cdf;
    double truncated_mass;
};

SlowVaryTable build_slow_vary_table(const SlowVaryModulated& sv) {
    if (!sv.base) throw std::invalid_argument("slow_vary_modulated: missing base law");
    const ArrivalSpec& base = *sv.base;
    std::int64_t n_max = sv.n_max;
    // Modulated CCDF G(n) = min(1, U(1+n) * base_ccdf(n)), forced nonincreasing.
    std::vector<double> ccdf(static_cast<std::size_t>(n_max) + 1);
    double prev = 1.0;
    for (std::int64_t n = 0; n <= n_max; ++n) {
        double u = std::pow(std::log1p(static_cast<double>(1 + n)), sv.sv_power);
        double g = std::min(1.0, u * ccdf_at(base, n));
        g = std::min(g, prev);
        ccdf[static_cast<std::size_t>(n)] = g;
        prev = g;
    }
    SlowVaryTable t;
    t.truncated_mass = ccdf.back();
    t.cdf.resize(ccdf.size());
    double norm = 1.0 - t.truncated_mass;
    if (norm <= 0) throw std::invalid_argument("slow_vary_modulated: n_max too small");
    double acc = 0.0;
    for (std::size_t n = 0; n < ccdf.size(); ++n) {
        double pm = (n == 0 ? 1.0 - ccdf[0] : ccdf[n - 1] - ccdf[n]);
        acc += pm / norm;
        t.cdf[n] = acc;
    }
    t.cdf.back() = 1.0;
    return t;
}

// Table cache keyed by parameter content (never the hot path; rebuilt when a
// different modulated law is queried on the same thread).
const SlowVaryTable& slow_vary_table(const SlowVaryModulated& sv) {
    struct Key {
        double sv_power;
        std::int64_t n_max;
        double probe1, probe2;
        bool operator==(const Key&) const = default;
    };
    Key want{sv.sv_power, sv.n_max,
             sv.base ? ccdf_at(*sv.base, 1) : -1.0,
             sv.base ? ccdf_at(*sv.base, 17) : -1.0};
    thread_local Key key{-1.0, -1, -1.0, -1.0};
    thread_local SlowVaryTable table;
    if (!(key == want)) {
        table = build_slow_vary_table(sv);
        key = want;
    }
    return table;
}

double tabulated_mean(const TabulatedPmf& t) {
    double m = 0.0;
    for (std::size_t i = 0; i < t.values.size(); ++i)
        m += static_cast<double>(t.values[i]) * t.probs[i];
    return m;
}

} // namespace

double zeta_fn(double s) {
    if (s <= 1.0) throw std::invalid_argument("zeta_fn: requires s > 1");
    // short descending sum plus an Euler-Maclaurin tail through B_8; the
    // first omitted term is below 1e-18 for every s > 1 at K = 64
    const std::int64_t K = 64;
    double sum = 0.0;
    for (std::int64_t k = K - 1; k >= 1; --k)
        sum += std::pow(static_cast<double>(k), -s);
    const double Kd = static_cast<double>(K);
    double tail = std::pow(Kd, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(Kd, -s);
    tail += s / 12.0 * std::pow(Kd, -s - 1.0);
    tail -= s * (s + 1) * (s + 2) / 720.0 * std::pow(Kd, -s - 3.0);
    tail += s * (s + 1) * (s + 2) * (s + 3) * (s + 4) / 30240.0 * std::pow(Kd, -s - 5.0);
    tail -= s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * (s + 5) * (s + 6) / 1209600.0
            * std::pow(Kd, -s - 7.0);
    return sum + tail;
}

double slow_vary_log_ratio(double sv_power, double a) {
    return sv_power * std::log(std::log1p(a)) / std::log(a);
}

double mean(const ArrivalSpec& spec) {
    return std::visit(
        [](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Bernoulli>) {
                return f.p;
            } else if constexpr (std::is_same_v<T, Poisson>) {
                return f.rate;
            } else if constexpr (std::is_same_v<T, GeometricBatch>) {
                return f.mean;
            } else if constexpr (std::is_same_v<T, DiscretePareto>) {
                return f.scale * zeta_fn(f.index);
            } else if constexpr (std::is_same_v<T, Zeta>) {
                return zeta_fn(f.index) / zeta_fn(f.index + 1.0);
            } else if constexpr (std::is_same_v<T, TabulatedPmf>) {
                return tabulated_mean(f);
            } else {
                // slow-vary modulated: mean of the truncated table
                const auto& t = slow_vary_table(f);
                double m = 0.0, prev = 0.0;
                for (std::size_t n = 0; n < t.cdf.size(); ++n) {
                    m += static_cast<double>(n) * (t.cdf[n] - prev);
                    prev = t.cdf[n];
                }
                return m;
            }
        },
        spec.family);
}

TailClass tail_class(const ArrivalSpec& spec) {
    return std::visit(
        [](const auto& f) -> TailClass {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, DiscretePareto> || std::is_same_v<T, Zeta>
                          || std::is_same_v<T, SlowVaryModulated>)
                return TailClass::HeavyOR;
            else
                return TailClass::Light;
        },
        spec.family);
}

std::int64_t max_support(const ArrivalSpec& spec) {
    return std::visit(
        [](const auto& f) -> std::int64_t {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Bernoulli>) {
                return 1;
            } else if constexpr (std::is_same_v<T, TabulatedPmf>) {
                std::int64_t m = 0;
                for (auto v : f.values) m = std::max(m, v);
                return m;
            } else if constexpr (std::is_same_v<T, SlowVaryModulated>) {
                return f.n_max;
            } else {
                return -1;
            }
        },
        spec.family);
}

double pmf_at(const ArrivalSpec& spec, std::int64_t n) {
    if (n < 0) return 0.0;
    return std::visit(
        [n](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            double x = static_cast<double>(n);
            if constexpr (std::is_same_v<T, Bernoulli>) {
                if (n == 0) return 1.0 - f.p;
                if (n == 1) return f.p;
                return 0.0;
            } else if constexpr (std::is_same_v<T, Poisson>) {
                return std::exp(-f.rate + x * std::log(f.rate) - std::lgamma(x + 1.0));
            } else if constexpr (std::is_same_v<T, GeometricBatch>) {
                double p = geometric_p(f);
                return (1.0 - p) * std::pow(p, x);
            } else if constexpr (std::is_same_v<T, DiscretePareto>) {
                if (n == 0) return 1.0 - f.scale;
                return f.scale * (std::pow(x, -f.index) - std::pow(x + 1.0, -f.index));
            } else if constexpr (std::is_same_v<T, Zeta>) {
                if (n == 0) return 0.0;
                return std::pow(x, -(f.index + 1.0)) / zeta_fn(f.index + 1.0);
            } else if constexpr (std::is_same_v<T, TabulatedPmf>) {
                for (std::size_t i = 0; i < f.values.size(); ++i)
                    if (f.values[i] == n) return f.probs[i];
                return 0.0;
            } else {
                const auto& t = slow_vary_table(f);
                if (n > f.n_max) return 0.0;
                double lo = n == 0 ? 0.0 : t.cdf[static_cast<std::size_t>(n - 1)];
                return t.cdf[static_cast<std::size_t>(n)] - lo;
            }
        },
        spec.family);
}

double ccdf_at(const ArrivalSpec& spec, std::int64_t n) {
    if (n < 0) return 1.0;
    return std::visit(
        [n, &spec](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            double x = static_cast<double>(n);
            if constexpr (std::is_same_v<T, Bernoulli>) {
                return n == 0 ? f.p : 0.0;
            } else if constexpr (std::is_same_v<T, Poisson>) {
                // P{X > n} = 1 - sum_{k<=n}; summed directly (rates are O(1))
                double term = std::exp(-f.rate), cum = term;
                for (std::int64_t k = 1; k <= n; ++k) {
                    term *= f.rate / static_cast<double>(k);
                    cum += term;
                }
                return std::max(0.0, 1.0 - cum);
            } else if constexpr (std::is_same_v<T, GeometricBatch>) {
                return std::pow(geometric_p(f), x + 1.0);
            } else if constexpr (std::is_same_v<T, DiscretePareto>) {
                return f.scale * std::pow(1.0 + x, -f.index);
            } else if constexpr (std::is_same_v<T, Zeta>) {
                // zeta tail: sum_{k>n} k^-(s) / zeta(s), s = index+1
                double s = f.index + 1.0;
                double z = zeta_fn(s);
                if (n == 0) return 1.0;
                double head = 0.0;
                if (n <= 100000) {
                    for (std::int64_t k = 1; k <= n; ++k)
                        head += std::pow(static_cast<double>(k), -s);
                    return std::max(0.0, 1.0 - head / z);
                }
                // deep tail via Euler-Maclaurin on the remainder
                double tail = std::pow(x, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(x, -s);
                return tail / z;
            } else if constexpr (std::is_same_v<T, TabulatedPmf>) {
                double c = 0.0;
                for (std::size_t i = 0; i < f.values.size(); ++i)
                    if (f.values[i] > n) c += f.probs[i];
                return c;
            } else {
                const auto& t = slow_vary_table(f);
                if (n >= f.n_max) return 0.0;
                return 1.0 - t.cdf[static_cast<std::size_t>(n)];
            }
        },
        spec.family);
}

std::int64_t sample(const ArrivalSpec& spec, RngStream& rng) {
    return std::visit(
        [&rng](const auto& f) -> std::int64_t {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Bernoulli>) {
                return rng.next_unit() < f.p ? 1 : 0;
            } else if constexpr (std::is_same_v<T, Poisson>) {
                // inversion by sequential search; rates here are O(1)
                double u = rng.next_unit();
                double term = std::exp(-f.rate), cum = term;
                std::int64_t k = 0;
                while (u >= cum && k < 500) {
                    ++k;
                    term *= f.rate / static_cast<double>(k);
                    cum += term;
                }
                return k;
            } else if constexpr (std::is_same_v<T, GeometricBatch>) {
                double p = geometric_p(f);
                if (p <= 0.0) return 0;
                double v = rng.next_unit_pos();
                return static_cast<std::int64_t>(std::floor(std::log(v) / std::log(p)));
            } else if constexpr (std::is_same_v<T, DiscretePareto>) {
                // X = min{n : scale (1+n)^-index < v}, v uniform on (0,1]
                double v = rng.next_unit_pos();
                if (v > f.scale) return 0;
                double x = std::pow(f.scale / v, 1.0 / f.index) - 1.0;
                return static_cast<std::int64_t>(std::floor(x)) + 1;
            } else if constexpr (std::is_same_v<T, Zeta>) {
                // rejection sampler for the zeta law with pmf exponent a = index+1
                double a = f.index + 1.0;
                double am1 = a - 1.0;
                double b = std::pow(2.0, am1);
                for (;;) {
                    double u = rng.next_unit_pos();
                    double v = rng.next_unit();
                    double x = std::floor(std::pow(u, -1.0 / am1));
                    if (x < 1.0 || x > 9.007199254740992e15) continue;
                    double t = std::pow(1.0 + 1.0 / x, am1);
                    if (v * x * (t - 1.0) / (b - 1.0) <= t / b)
                        return static_cast<std::int64_t>(x);
                }
            } else if constexpr (std::is_same_v<T, TabulatedPmf>) {
                double u = rng.next_unit();
                double cum = 0.0;
                for (std::size_t i = 0; i < f.values.size(); ++i) {
                    cum += f.probs[i];
                    if (u < cum) return f.values[i];
                }
                return f.values.back();
            } else {
                const auto& t = slow_vary_table(f);
                double u = rng.next_unit();
                auto it = std::upper_bound(t.cdf.begin(), t.cdf.end(), u);
                return static_cast<std::int64_t>(it - t.cdf.begin());
            }
        },
        spec.family);
}

std::vector<std::int64_t> sample_arrivals(const ArrivalSpec& spec, RngStream& rng,
                                          std::size_t n_slots) {
    std::vector<std::int64_t> out(n_slots);
    for (auto& v : out) v = sample(spec, rng);
    return out;
}

Pmf pmf_table(const ArrivalSpec& spec, std::int64_t n_max) {
    if (n_max < 1) throw std::invalid_argument("pmf_table: n_max must be >= 1");
    Pmf out;
    out.p.resize(static_cast<std::size_t>(n_max) + 1);
    if (const auto* dp = std::get_if<DiscretePareto>(&spec.family)) {
        // ccdf differences in one pass; cheaper and exactly consistent
        double prev = dp->scale;
        out.p[0] = 1.0 - dp->scale;
        for (std::int64_t n = 1; n <= n_max; ++n) {
            double c = dp->scale * std::pow(1.0 + static_cast<double>(n), -dp->index);
            out.p[static_cast<std::size_t>(n)] = prev - c;
            prev = c;
        }
        out.truncated_mass = prev;
        return out;
    }
    for (std::int64_t n = 0; n <= n_max; ++n)
        out.p[static_cast<std::size_t>(n)] = pmf_at(spec, n);
    double total = std::accumulate(out.p.begin(), out.p.end(), 0.0);
    out.truncated_mass = std::max(0.0, 1.0 - total);
    return out;
}

Pmf positive_part(const ArrivalSpec& spec, std::int64_t n_max) {
    Pmf table = pmf_table(spec, n_max);
    double pos = std::accumulate(table.p.begin() + 1, table.p.end(), 0.0);
    if (pos <= 0.0)
        throw std::invalid_argument("positive_part: law has no mass on {1,2,...}");
    Pmf out;
    out.p.resize(table.p.size());
    out.p[0] = 0.0;
    for (std::size_t k = 1; k < table.p.size(); ++k) out.p[k] = table.p[k] / pos;
    out.truncated_mass = table.truncated_mass;
    return out;
}

void validate_spec(const ArrivalSpec& spec, const std::string& label) {
    std::visit(
        [&label](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            auto fail = [&label](const std::string& field, const std::string& msg) {
                throw std::invalid_argument(label + "." + field + ": " + msg);
            };
            if constexpr (std::is_same_v<T, Bernoulli>) {
                if (!(f.p >= 0.0 && f.p <= 1.0)) fail("p", "must be in [0,1]");
            } else if constexpr (std::is_same_v<T, Poisson>) {
                if (!(f.rate > 0.0)) fail("rate", "must be > 0");
            } else if constexpr (std::is_same_v<T, GeometricBatch>) {
                if (!(f.mean >= 0.0)) fail("mean", "must be >= 0");
            } else if constexpr (std::is_same_v<T, DiscretePareto>) {
                if (!(f.index > 1.0)) fail("index", "must be > 1 so the mean exists");
                if (!(f.scale > 0.0 && f.scale <= 1.0)) fail("scale", "must be in (0,1]");
            } else if constexpr (std::is_same_v<T, Zeta>) {
                if (!(f.index > 1.0)) fail("index", "must be > 1 so the mean exists");
            } else if constexpr (std::is_same_v<T, TabulatedPmf>) {
                if (f.values.empty()) fail("values", "must be non-empty");
                if (f.values.size() != f.probs.size())
                    fail("probs", "must match values in length");
                double sum = 0.0;
                for (std::size_t i = 0; i < f.values.size(); ++i) {
                    if (f.values[i] < 0) fail("values", "must be non-negative integers");
                    if (!(f.probs[i] >= 0.0)) fail("probs", "must be non-negative");
                    sum += f.probs[i];
                }
                if (std::abs(sum - 1.0) > 1e-9) fail("probs", "must sum to 1");
            } else {
                if (!f.base) fail("base", "must be given");
                if (!(f.sv_power >= 0.0)) fail("sv_power", "must be >= 0");
                if (f.n_max < 2) fail("n_max", "must be >= 2");
                validate_spec(*f.base, label + ".base");
            }
        },
        spec.family);
}

std::string family_name(const ArrivalSpec& spec) {
    return std::visit(
        [](const auto& f) -> std::string {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Bernoulli>) return "bernoulli";
            else if constexpr (std::is_same_v<T, Poisson>) return "poisson";
            else if constexpr (std::is_same_v<T, GeometricBatch>) return "geometric_batch";
            else if constexpr (std::is_same_v<T, DiscretePareto>) return "discrete_pareto";
            else if constexpr (std::is_same_v<T, Zeta>) return "zeta";
            else if constexpr (std::is_same_v<T, TabulatedPmf>) return "tabulated";
            else return "slow_vary_modulated";
        },
        spec.family);
}

} // namespace hqsim
