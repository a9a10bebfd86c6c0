#include "hqsim/ccdf_histogram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hqsim {

CcdfHistogram::CcdfHistogram(std::int64_t direct_cap, double ratio)
    : direct_cap_(direct_cap), ratio_(ratio) {
    if (direct_cap < 1) throw std::invalid_argument("CcdfHistogram: direct_cap < 1");
    if (!(ratio > 1.0)) throw std::invalid_argument("CcdfHistogram: ratio must be > 1");
    direct_.assign(static_cast<std::size_t>(direct_cap) + 1, 0);
    std::int64_t edge = direct_cap + 1;
    const std::int64_t top = std::int64_t{1} << 62;
    while (edge < top) {
        edges_.push_back(edge);
        auto next = static_cast<std::int64_t>(std::floor(static_cast<double>(edge) * ratio));
        edge = std::max(edge + 1, next);
    }
    bucket_.assign(edges_.size(), 0);
}

void CcdfHistogram::add(std::int64_t v) {
    if (v < 0) throw std::invalid_argument("CcdfHistogram: negative value");
    if (v <= direct_cap_)
        ++direct_[static_cast<std::size_t>(v)];
    else
        ++bucket_[bucket_index(v)];
    ++total_;
}

std::size_t CcdfHistogram::bucket_index(std::int64_t v) const {
    // last edge <= v
    auto it = std::upper_bound(edges_.begin(), edges_.end(), v);
    return static_cast<std::size_t>(it - edges_.begin()) - 1;
}

void CcdfHistogram::merge(const CcdfHistogram& other) {
    if (other.direct_cap_ != direct_cap_ || other.ratio_ != ratio_)
        throw std::invalid_argument("CcdfHistogram: merging different geometries");
    for (std::size_t i = 0; i < direct_.size(); ++i) direct_[i] += other.direct_[i];
    for (std::size_t i = 0; i < bucket_.size(); ++i) bucket_[i] += other.bucket_[i];
    total_ += other.total_;
}

std::vector<std::uint64_t> CcdfHistogram::suffix_direct() const {
    std::vector<std::uint64_t> s(direct_.size() + 1, 0);
    for (std::size_t i = direct_.size(); i-- > 0;) s[i] = s[i + 1] + direct_[i];
    return s;
}

std::vector<std::uint64_t> CcdfHistogram::suffix_bucket() const {
    std::vector<std::uint64_t> s(bucket_.size() + 1, 0);
    for (std::size_t i = bucket_.size(); i-- > 0;) s[i] = s[i + 1] + bucket_[i];
    return s;
}

std::uint64_t CcdfHistogram::count_ge(std::int64_t b) const {
    if (b <= 0) return total_;
    auto sd = suffix_direct();
    auto sb = suffix_bucket();
    if (b <= direct_cap_ + 1)
        return sd[static_cast<std::size_t>(b)] + sb[0];
    return sb[bucket_index(b)];
}

double CcdfHistogram::ccdf_ge(std::int64_t b) const {
    if (total_ == 0) return 0.0;
    return static_cast<double>(count_ge(b)) / static_cast<double>(total_);
}

std::int64_t CcdfHistogram::max_value() const {
    for (std::size_t i = bucket_.size(); i-- > 0;)
        if (bucket_[i] > 0) return edges_[i]; // resolved to the bucket edge
    for (std::size_t i = direct_.size(); i-- > 0;)
        if (direct_[i] > 0) return static_cast<std::int64_t>(i);
    return -1;
}

std::int64_t CcdfHistogram::quantile_b(double q) const {
    auto pts = curve();
    std::int64_t b = 0;
    for (const auto& p : pts) {
        if (p.ccdf <= q) return static_cast<std::int64_t>(p.b);
        b = static_cast<std::int64_t>(p.b) + 1;
    }
    return b;
}

std::vector<CcdfPoint> CcdfHistogram::curve() const {
    std::vector<CcdfPoint> out;
    if (total_ == 0) return out;
    auto sd = suffix_direct();
    auto sb = suffix_bucket();
    double tot = static_cast<double>(total_);
    for (std::size_t v = 0; v < direct_.size(); ++v) {
        if (direct_[v] == 0) continue;
        CcdfPoint p;
        p.b = static_cast<double>(v);
        p.count_ge = static_cast<double>(sd[v] + sb[0]);
        p.ccdf = p.count_ge / tot;
        p.mass = static_cast<double>(direct_[v]);
        out.push_back(p);
    }
    for (std::size_t i = 0; i < bucket_.size(); ++i) {
        if (bucket_[i] == 0) continue;
        CcdfPoint p;
        p.b = static_cast<double>(edges_[i]);
        p.count_ge = static_cast<double>(sb[i]);
        p.ccdf = p.count_ge / tot;
        p.mass = static_cast<double>(bucket_[i]);
        out.push_back(p);
    }
    return out;
}

std::vector<CcdfPoint> CcdfHistogram::fit_grid() const {
    std::vector<CcdfPoint> out;
    if (total_ == 0) return out;
    auto sd = suffix_direct();
    auto sb = suffix_bucket();
    double tot = static_cast<double>(total_);

    std::vector<std::int64_t> grid;
    std::int64_t g = 1;
    while (g <= direct_cap_) {
        grid.push_back(g);
        auto next = static_cast<std::int64_t>(std::floor(static_cast<double>(g) * ratio_));
        g = std::max(g + 1, next);
    }
    grid.insert(grid.end(), edges_.begin(), edges_.end());

    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::int64_t b = grid[i];
        std::uint64_t cge = b <= direct_cap_ + 1
                                ? sd[static_cast<std::size_t>(b)] + sb[0]
                                : sb[bucket_index(b)];
        std::uint64_t cge_next = 0;
        if (i + 1 < grid.size()) {
            std::int64_t bn = grid[i + 1];
            cge_next = bn <= direct_cap_ + 1
                           ? sd[static_cast<std::size_t>(bn)] + sb[0]
                           : sb[bucket_index(bn)];
        }
        CcdfPoint p;
        p.b = static_cast<double>(b);
        p.count_ge = static_cast<double>(cge);
        p.ccdf = p.count_ge / tot;
        p.mass = static_cast<double>(cge - cge_next);
        out.push_back(p);
    }
    return out;
}

void CcdfHistogram::write_csv(std::ostream& os) const {
    os << "b,count_ge,ccdf\n";
    char buf[64];
    for (const auto& p : curve()) {
        os << static_cast<std::int64_t>(p.b) << ','
           << static_cast<std::uint64_t>(p.count_ge) << ',';
        std::snprintf(buf, sizeof buf, "%.17g", p.ccdf);
        os << buf << '\n';
    }
}

} // namespace hqsim
