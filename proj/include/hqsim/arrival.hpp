#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "hqsim/rng.hpp"

namespace hqsim {

struct ArrivalSpec;

// Number of packets arriving in one slot. Light families have a finite
// log-MGF on an open interval around 0; heavy families have a regularly
// varying (power-law) tail and only finitely many moments.
enum class TailClass { Light, HeavyOR };

struct Bernoulli {
    double p; // P{X=1}, arrivals in {0,1}
};

struct Poisson {
    double rate;
};

// Geometric number of packets per slot on {0,1,2,...} with the given mean;
// success parameter p = mean/(1+mean), P{X=k} = (1-p) p^k.
struct GeometricBatch {
    double mean;
};

// Power-law burst size with CCDF P{X > n} = scale * (1+n)^(-index), n >= 0.
// scale in (0,1] is the burst emission probability: P{X=0} = 1-scale, so the
// law doubles as a rate-tuned mixture (scale = target_mean / zeta(index)).
// E[X] = scale * zeta(index); finite mean requires index > 1. The positive
// part is scale-free: P{X > n | X >= 1} = (1+n)^(-index).
struct DiscretePareto {
    double index;
    double scale = 1.0;
};

// P{X = n} = n^-(index+1) / zeta(index+1) on {1,2,...}; the CCDF is
// regularly varying with the given index.
struct Zeta {
    double index;
};

struct TabulatedPmf {
    std::vector<std::int64_t> values;
    std::vector<double> probs;
};

// Heavy base law with its CCDF modulated by the slowly varying factor
// U(x) = (log(1+x))^sv_power. Tabulated on {0..n_max}; diagnostics family.
struct SlowVaryModulated {
    std::shared_ptr<const ArrivalSpec> base;
    double sv_power = 1.0;
    std::int64_t n_max = 1 << 20;
};

using ArrivalFamily = std::variant<Bernoulli, Poisson, GeometricBatch,
                                   DiscretePareto, Zeta, TabulatedPmf,
                                   SlowVaryModulated>;

struct ArrivalSpec {
    ArrivalFamily family;
};

// Probability mass table over {0..n_max()}. For infinite-support laws the
// table is truncated and renormalized; the mass cut off is recorded.
struct Pmf {
    std::vector<double> p;
    double truncated_mass = 0.0;
    std::int64_t n_max() const { return static_cast<std::int64_t>(p.size()) - 1; }
};

double mean(const ArrivalSpec& spec);
TailClass tail_class(const ArrivalSpec& spec);

// Largest support point, or -1 if unbounded.
std::int64_t max_support(const ArrivalSpec& spec);

// Exact pointwise law. ccdf_at returns P{X > n}.
double pmf_at(const ArrivalSpec& spec, std::int64_t n);
double ccdf_at(const ArrivalSpec& spec, std::int64_t n);

std::int64_t sample(const ArrivalSpec& spec, RngStream& rng);
std::vector<std::int64_t> sample_arrivals(const ArrivalSpec& spec, RngStream& rng,
                                          std::size_t n_slots);

Pmf pmf_table(const ArrivalSpec& spec, std::int64_t n_max);

// Law of X conditioned on X >= 1, truncated at n_max and renormalized.
Pmf positive_part(const ArrivalSpec& spec, std::int64_t n_max);

// Riemann zeta for s > 1 (Euler-Maclaurin tail correction, ~1e-13 accurate).
double zeta_fn(double s);

// log U(a) / log a for U(x) = (log(1+x))^p; tends to 0 as a grows, which is
// what makes U slowly varying.
double slow_vary_log_ratio(double sv_power, double a);

// Throws std::invalid_argument naming the offending parameter.
void validate_spec(const ArrivalSpec& spec, const std::string& label);

std::string family_name(const ArrivalSpec& spec);

} // namespace hqsim
