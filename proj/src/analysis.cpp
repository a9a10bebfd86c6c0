#include "hqsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hqsim {

namespace {

double geometric_p(double mean) { return mean / (1.0 + mean); }

// sup_{theta in [0, hi]} theta*x - log_mgf(theta) by ternary search; the
// objective is concave because log_mgf is convex.
double ternary_max(const ArrivalSpec& spec, double x, double lo, double hi) {
    for (int i = 0; i < 300 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
        double m1 = lo + (hi - lo) / 3.0;
        double m2 = hi - (hi - lo) / 3.0;
        double g1 = m1 * x - log_mgf(spec, m1);
        double g2 = m2 * x - log_mgf(spec, m2);
        if (g1 < g2)
            lo = m1;
        else
            hi = m2;
    }
    double mid = 0.5 * (lo + hi);
    return std::max(0.0, mid * x - log_mgf(spec, mid));
}

} // namespace

double theta_max(const ArrivalSpec& spec) {
    if (tail_class(spec) == TailClass::HeavyOR) return 0.0;
    if (const auto* g = std::get_if<GeometricBatch>(&spec.family)) {
        double p = geometric_p(g->mean);
        return p > 0.0 ? -std::log(p) : kInf;
    }
    return kInf;
}

double log_mgf(const ArrivalSpec& spec, double theta) {
    if (theta < 0.0) throw std::invalid_argument("log_mgf: theta must be >= 0");
    if (theta == 0.0) return 0.0;
    return std::visit(
        [theta](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Bernoulli>) {
                // theta + log(p + (1-p)e^-theta) stays finite for huge theta
                return theta + std::log(f.p + (1.0 - f.p) * std::exp(-theta));
            } else if constexpr (std::is_same_v<T, Poisson>) {
                return f.rate * std::expm1(theta);
            } else if constexpr (std::is_same_v<T, GeometricBatch>) {
                double p = geometric_p(f.mean);
                if (p <= 0.0) return 0.0;
                double z = 1.0 - p * std::exp(theta);
                if (z <= 0.0) return kInf;
                return std::log(1.0 - p) - std::log(z);
            } else if constexpr (std::is_same_v<T, TabulatedPmf>) {
                // logsumexp anchored at the top atom
                double vmax = 0.0;
                for (auto v : f.values) vmax = std::max(vmax, static_cast<double>(v));
                double s = 0.0;
                for (std::size_t i = 0; i < f.values.size(); ++i)
                    s += f.probs[i]
                         * std::exp(theta * (static_cast<double>(f.values[i]) - vmax));
                return theta * vmax + std::log(s);
            } else {
                return kInf; // power-law tail: no MGF for theta > 0
            }
        },
        spec.family);
}

double legendre(const ArrivalSpec& spec, double x) {
    if (x < 0.0) throw std::invalid_argument("legendre: x must be >= 0");
    if (tail_class(spec) == TailClass::HeavyOR) return 0.0;

    std::int64_t vmax = max_support(spec);
    if (vmax >= 0) {
        double top = static_cast<double>(vmax);
        if (x > top) return kInf;
        if (x == top) return -std::log(pmf_at(spec, vmax)); // attained as theta -> inf
    }

    double tmax = theta_max(spec);
    double hi;
    if (std::isfinite(tmax)) {
        hi = tmax; // log_mgf blows up at the boundary, the max is interior
    } else {
        // grow until the slope of the concave objective turns negative, so
        // the maximizer is bracketed even when 2*hi already overshoots it
        hi = 1.0;
        auto g = [&](double t) { return t * x - log_mgf(spec, t); };
        while (hi < 0x1p40 && g(hi * (1.0 + 1e-7)) >= g(hi)) hi *= 2.0;
        if (hi >= 0x1p40) return kInf; // slope never closes
    }
    return ternary_max(spec, x, 0.0, hi);
}

double legendre_poisson_closed(double rate, double x) {
    if (x <= rate) return 0.0; // theta* < 0, clipped to the theta >= 0 domain
    return x * std::log(x / rate) - x + rate;
}

ExponentResult intrinsic_exponent(const ArrivalSpec& light) {
    if (tail_class(light) != TailClass::Light)
        throw std::invalid_argument("intrinsic_exponent: light law required");
    double m = mean(light);
    if (!(m < 1.0))
        throw std::invalid_argument("intrinsic_exponent: light rate must be < 1");

    ExponentResult r;
    std::int64_t vmax = max_support(light);
    if (vmax >= 0 && vmax <= 1) return r; // never overflows at exponential scale

    // sup form: unique positive root of f(theta) = log_mgf(theta) - theta,
    // which starts negative (slope m-1 < 0) and is convex.
    auto f = [&light](double t) { return log_mgf(light, t) - t; };
    double tmax = theta_max(light);
    double lo = 1e-12, hi = 0.0;
    if (std::isfinite(tmax)) {
        for (int k = 1; k <= 60 && hi == 0.0; ++k) {
            double b = tmax * (1.0 - std::pow(0.5, k));
            if (f(b) > 0.0) hi = b;
        }
        if (hi == 0.0) { // finite everywhere up to the boundary
            r.sup_form = r.inf_form = r.value = tmax;
            return r;
        }
    } else {
        for (double b = 1.0; b <= 0x1p40; b *= 2.0) {
            if (f(b) > 0.0) {
                hi = b;
                break;
            }
        }
        if (hi == 0.0) return r; // f stays negative: infinite exponent
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    r.sup_form = 0.5 * (lo + hi);

    // inf form: minimize legendre(1+a)/a; coarse log grid, then golden
    // section between the grid neighbors of the best point.
    double a_top = vmax >= 0 ? static_cast<double>(vmax) - 1.0 : 1e6;
    const int kGrid = 240;
    double best = kInf, best_a = a_top;
    double la = std::log(1e-6), lb = std::log(a_top);
    std::vector<double> as(kGrid);
    for (int i = 0; i < kGrid; ++i)
        as[static_cast<std::size_t>(i)] =
            std::exp(la + (lb - la) * static_cast<double>(i) / (kGrid - 1));
    int best_i = kGrid - 1;
    for (int i = 0; i < kGrid; ++i) {
        double a = as[static_cast<std::size_t>(i)];
        double g = legendre(light, 1.0 + a) / a;
        if (g < best) {
            best = g;
            best_a = a;
            best_i = i;
        }
    }
    (void)best_a;
    double glo = as[static_cast<std::size_t>(std::max(0, best_i - 1))];
    double ghi = as[static_cast<std::size_t>(std::min(kGrid - 1, best_i + 1))];
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = ghi - phi * (ghi - glo), x2 = glo + phi * (ghi - glo);
    double f1 = legendre(light, 1.0 + x1) / x1, f2 = legendre(light, 1.0 + x2) / x2;
    for (int i = 0; i < 200 && ghi - glo > 1e-13 * std::max(1.0, ghi); ++i) {
        if (f1 < f2) {
            ghi = x2;
            x2 = x1;
            f2 = f1;
            x1 = ghi - phi * (ghi - glo);
            f1 = legendre(light, 1.0 + x1) / x1;
        } else {
            glo = x1;
            x1 = x2;
            f1 = f2;
            x2 = glo + phi * (ghi - glo);
            f2 = legendre(light, 1.0 + x2) / x2;
        }
    }
    r.inf_form = std::min(best, std::min(f1, f2));

    if (std::abs(r.sup_form - r.inf_form) > 1e-6 * std::max(1.0, r.sup_form))
        throw std::logic_error("intrinsic_exponent: sup and inf forms disagree");
    r.value = r.sup_form;
    return r;
}

TailPrediction predict_tail_coefficient(const Policy& policy, double heavy_index) {
    if (!(heavy_index > 1.0))
        throw std::invalid_argument("predict_tail_coefficient: heavy index must be > 1");
    TailPrediction p;
    p.q_h_coefficient = heavy_index - 1.0;
    switch (policy.kind) {
    case PolicyKind::PriorityH:
        p.q_l_coefficient = heavy_index - 1.0;
        break;
    case PolicyKind::PriorityL:
    case PolicyKind::LogMaxWeight:
        p.q_l_coefficient = kInf;
        break;
    case PolicyKind::MaxWeightAlpha: {
        double ratio = policy.alpha_l / policy.alpha_h;
        p.q_l_coefficient =
            ratio <= 1.0 ? heavy_index - 1.0 : ratio * (heavy_index - 1.0);
        break;
    }
    }
    return p;
}

double lmw_exponent(const ArrivalSpec& light, double heavy_index) {
    if (!(heavy_index > 1.0))
        throw std::invalid_argument("lmw_exponent: heavy index must be > 1");
    return std::min(intrinsic_exponent(light).value, heavy_index - 1.0);
}

OrderEstimate order_diagnostic(const std::vector<double>& xs,
                               const std::vector<double>& ccdf,
                               double x_lo, double x_hi) {
    if (xs.size() != ccdf.size())
        throw std::invalid_argument("order_diagnostic: xs and ccdf sizes differ");
    OrderEstimate est;
    est.lower = kInf;
    est.upper = -kInf;
    std::size_t used = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] < x_lo || xs[i] > x_hi || xs[i] <= 1.0 || ccdf[i] <= 0.0) continue;
        double r = -std::log(ccdf[i]) / std::log(xs[i]);
        est.lower = std::min(est.lower, r);
        est.upper = std::max(est.upper, r);
        ++used;
    }
    if (used == 0)
        throw std::invalid_argument("order_diagnostic: no CCDF points in window");
    est.effectively_light = est.lower > 4.0;
    return est;
}

} // namespace hqsim
