#include "hqsim/estimators.hpp"

#include <algorithm>
#include <cmath>

namespace hqsim {

namespace {

struct Ols {
    double slope = 0.0, intercept = 0.0, stderr_slope = 0.0, r2 = 0.0;
};

Ols ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    Ols o;
    o.slope = sxy / sxx;
    o.intercept = my - o.slope * mx;
    double sse = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double e = y[i] - (o.intercept + o.slope * x[i]);
        sse += e * e;
    }
    if (x.size() > 2) o.stderr_slope = std::sqrt(sse / (n - 2.0) / sxx);
    o.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
    return o;
}

} // namespace

TailFit fit_tail_index(const std::vector<CcdfPoint>& grid, double q_hi, double q_lo,
                       int min_buckets, double min_bucket_count) {
    // usable points: inside the CCDF window, b >= 1, and not starved; the
    // grid is sorted by b, so starved points truncate the deep end
    std::vector<const CcdfPoint*> pts;
    double deepest = 1.0;
    for (const auto& p : grid) {
        if (p.ccdf > 0.0) deepest = std::min(deepest, p.ccdf);
        if (p.b < 1.0 || p.ccdf > q_hi || p.ccdf < q_lo || p.ccdf <= 0.0) continue;
        if (p.mass < min_bucket_count) break;
        pts.push_back(&p);
    }
    if (static_cast<int>(pts.size()) < min_buckets)
        throw EstimatorError(
            "tail fit window too thin: " + std::to_string(pts.size()) + " of "
            + std::to_string(min_buckets) + " buckets with >= "
            + std::to_string(static_cast<std::int64_t>(min_bucket_count))
            + " samples in ccdf window [" + std::to_string(q_lo) + ", "
            + std::to_string(q_hi) + "]; data reaches ccdf "
            + std::to_string(deepest));

    std::vector<double> x, y;
    x.reserve(pts.size());
    y.reserve(pts.size());
    for (const auto* p : pts) {
        x.push_back(std::log(p->b));
        y.push_back(std::log(p->ccdf));
    }
    Ols o = ols_fit(x, y);

    TailFit fit;
    fit.index = -o.slope;
    fit.stderr_ = o.stderr_slope;
    fit.b_lo = pts.front()->b;
    fit.b_hi = pts.back()->b;
    fit.n_points = static_cast<int>(pts.size());

    // Hill cross-check: treat each bucket's mass as sitting at the geometric
    // midpoint of [b_i, b_{i+1}) and threshold at the window's low edge.
    double x_min = pts.front()->b;
    double acc = 0.0, n_tail = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& p = grid[i];
        if (p.b < x_min || p.mass <= 0.0) continue;
        double b_next = i + 1 < grid.size() ? grid[i + 1].b : p.b * 1.1;
        double rep = std::sqrt(p.b * b_next);
        acc += p.mass * std::log(rep / x_min);
        n_tail += p.mass;
    }
    fit.hill_index = acc > 0.0 ? n_tail / acc : 0.0;
    fit.hill_disagrees = std::abs(fit.hill_index - fit.index) > 0.3;

    // curvature: split the window and compare local slopes
    if (pts.size() >= 6) {
        std::size_t half = pts.size() / 2;
        std::vector<double> x1(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(half));
        std::vector<double> y1(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(half));
        std::vector<double> x2(x.begin() + static_cast<std::ptrdiff_t>(half), x.end());
        std::vector<double> y2(y.begin() + static_cast<std::ptrdiff_t>(half), y.end());
        double s1 = -ols_fit(x1, y1).slope, s2 = -ols_fit(x2, y2).slope;
        fit.curvature = s2 - s1 > std::max(0.3, 0.2 * fit.index);
    }
    return fit;
}

LdFit fit_ld_exponent(const std::vector<CcdfPoint>& grid, double b_lo, double b_hi,
                      double min_count) {
    if (b_hi <= 0.0) {
        for (const auto& p : grid)
            if (p.count_ge >= min_count) b_hi = p.b;
    }
    std::vector<double> x, y;
    for (const auto& p : grid) {
        if (p.b < b_lo || p.b > b_hi || p.ccdf <= 0.0) continue;
        if (p.count_ge < min_count) break;
        x.push_back(p.b);
        y.push_back(std::log(p.ccdf));
    }
    if (x.size() < 3)
        throw EstimatorError("rate fit window [" + std::to_string(b_lo) + ", "
                             + std::to_string(b_hi) + "] has "
                             + std::to_string(x.size())
                             + " usable levels; need >= 3");
    Ols o = ols_fit(x, y);
    LdFit fit;
    fit.rate = -o.slope;
    fit.r2 = o.r2;
    fit.b_lo = x.front();
    fit.b_hi = x.back();
    fit.n_points = static_cast<int>(x.size());
    return fit;
}

MomentProbe::MomentProbe(double exponent) : c_(exponent) {
    if (!(exponent > 0.0))
        throw std::invalid_argument("MomentProbe: exponent must be > 0");
}

void MomentProbe::add(double x) {
    sum_ += std::pow(x, c_);
    ++n_;
    if (n_ == next_checkpoint_) {
        checkpoints_.push_back({n_, sum_ / static_cast<double>(n_)});
        // ~10 checkpoints per decade
        next_checkpoint_ =
            std::max(next_checkpoint_ + 1,
                     static_cast<std::uint64_t>(static_cast<double>(next_checkpoint_) * 1.2589254117941673));
    }
}

double MomentProbe::running_mean() const {
    return n_ > 0 ? sum_ / static_cast<double>(n_) : 0.0;
}

MomentProbe::Verdict MomentProbe::verdict() const {
    if (checkpoints_.size() < 3 || n_ < 1000) return Verdict::Undetermined;
    double n_end = static_cast<double>(checkpoints_.back().n);
    double mean_end = checkpoints_.back().mean;
    // reference point two decades back (or as far as the data allows)
    double target = n_end / 100.0;
    const Checkpoint* ref = &checkpoints_.front();
    for (const auto& c : checkpoints_)
        if (static_cast<double>(c.n) <= target) ref = &c;
    double span = std::log(n_end / static_cast<double>(ref->n));
    if (span <= 0.0 || ref->mean <= 0.0 || mean_end <= 0.0)
        return Verdict::Undetermined;
    double slope = std::log(mean_end / ref->mean) / span;
    bool grew = mean_end > 1.15 * ref->mean;
    return (slope > 0.05 && grew) ? Verdict::Diverging : Verdict::Saturating;
}

std::string MomentProbe::verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Saturating: return "saturating";
    case Verdict::Diverging: return "diverging";
    case Verdict::Undetermined: return "undetermined";
    }
    return "undetermined";
}

} // namespace hqsim
