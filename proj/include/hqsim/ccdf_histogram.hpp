#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

namespace hqsim {

// One resampled CCDF point used by the fit routines and the CSV export.
// count_ge counts samples >= b (so ccdf = P{X >= b}); mass counts samples in
// [b, next grid point).
struct CcdfPoint {
    double b = 0.0;
    double ccdf = 0.0;
    double count_ge = 0.0;
    double mass = 0.0;
};

// Tail histogram over non-negative integers: exact counts for values up to
// direct_cap, geometric buckets (edge ratio ~1.1) above. Two histograms with
// the same geometry merge by integer addition, so merged results do not
// depend on merge order.
class CcdfHistogram {
public:
    explicit CcdfHistogram(std::int64_t direct_cap = 4096, double ratio = 1.1);

    void add(std::int64_t v);
    void merge(const CcdfHistogram& other);

    std::uint64_t total() const { return total_; }
    std::int64_t direct_cap() const { return direct_cap_; }

    // samples >= b; exact for b <= direct_cap+1 and at bucket edges,
    // resolved at the containing bucket's lower edge otherwise.
    std::uint64_t count_ge(std::int64_t b) const;

    // P{X >= b}
    double ccdf_ge(std::int64_t b) const;

    // largest value with a sample, - 1 if empty
    std::int64_t max_value() const;

    // smallest b with ccdf_ge(b) <= q (grid-resolved above the cap)
    std::int64_t quantile_b(double q) const;

    // every value/edge with mass, ascending: the frozen CSV content
    std::vector<CcdfPoint> curve() const;

    // log-spaced grid (the bucket ratio) for slope fits: exact counts at
    // grid points within the direct range, bucket edges above
    std::vector<CcdfPoint> fit_grid() const;

    // header "b,count_ge,ccdf", one row per curve() point
    void write_csv(std::ostream& os) const;

    const std::vector<std::uint64_t>& direct_counts() const { return direct_; }

private:
    std::int64_t direct_cap_;
    double ratio_;
    std::vector<std::uint64_t> direct_;  // value-indexed counts, 0..direct_cap
    std::vector<std::int64_t> edges_;    // lower edges of geometric buckets
    std::vector<std::uint64_t> bucket_;  // counts per geometric bucket
    std::uint64_t total_ = 0;

    std::size_t bucket_index(std::int64_t v) const;
    std::vector<std::uint64_t> suffix_direct() const;
    std::vector<std::uint64_t> suffix_bucket() const;
};

} // namespace hqsim
