#pragma once

#include <cmath>
#include <vector>

#include "hqsim/arrival.hpp"
#include "hqsim/rng.hpp"

namespace hqsim {

// Flattened per-family sampler for the slot loop: resolves the variant once
// and draws with a plain switch. Produces the same stream as sample() on the
// original spec for the families it specializes.
class ArrivalSampler {
public:
    explicit ArrivalSampler(const ArrivalSpec& spec) : spec_(&spec) {
        if (const auto* b = std::get_if<Bernoulli>(&spec.family)) {
            kind_ = Kind::Bern;
            a_ = b->p;
        } else if (const auto* p = std::get_if<Poisson>(&spec.family)) {
            kind_ = Kind::Pois;
            double term = std::exp(-p->rate), cum = term;
            cdf_.push_back(cum);
            for (int k = 1; k < 200 && cum < 1.0 - 1e-18; ++k) {
                term *= p->rate / k;
                cum += term;
                cdf_.push_back(cum);
            }
        } else if (const auto* g = std::get_if<GeometricBatch>(&spec.family)) {
            kind_ = g->mean > 0.0 ? Kind::Geom : Kind::Zero;
            a_ = g->mean > 0.0 ? std::log(g->mean / (1.0 + g->mean)) : 0.0;
        } else if (const auto* dp = std::get_if<DiscretePareto>(&spec.family)) {
            kind_ = Kind::Pareto;
            a_ = dp->scale;
            b_ = 1.0 / dp->index;
        } else {
            kind_ = Kind::Generic;
        }
    }

    std::int64_t draw(RngStream& rng) const {
        switch (kind_) {
        case Kind::Bern:
            return rng.next_unit() < a_ ? 1 : 0;
        case Kind::Pois: {
            double u = rng.next_unit();
            std::size_t k = 0;
            while (k < cdf_.size() && u >= cdf_[k]) ++k;
            return static_cast<std::int64_t>(k);
        }
        case Kind::Geom: {
            double v = rng.next_unit_pos();
            return static_cast<std::int64_t>(std::floor(std::log(v) / a_));
        }
        case Kind::Pareto: {
            double v = rng.next_unit_pos();
            if (v > a_) return 0;
            double x = std::pow(a_ / v, b_) - 1.0;
            return static_cast<std::int64_t>(std::floor(x)) + 1;
        }
        case Kind::Zero:
            return 0;
        case Kind::Generic:
            return sample(*spec_, rng);
        }
        return 0;
    }

private:
    enum class Kind { Bern, Pois, Geom, Pareto, Zero, Generic };
    Kind kind_ = Kind::Generic;
    const ArrivalSpec* spec_;
    double a_ = 0.0, b_ = 0.0;
    std::vector<double> cdf_;
};

} // namespace hqsim
