#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hqsim/ccdf_histogram.hpp"

namespace hqsim {

// Raised when a fit window cannot be populated at the data's depth. Carries
// how deep the data actually reaches so callers can report it.
struct EstimatorError : std::runtime_error {
    explicit EstimatorError(const std::string& msg) : std::runtime_error(msg) {}
};

struct TailFit {
    double index = 0.0;      // negated log-log OLS slope
    double stderr_ = 0.0;    // OLS slope standard error
    double hill_index = 0.0; // cross-check on the same window
    bool hill_disagrees = false; // |ols - hill| > 0.3
    bool curvature = false;      // local slope steepens across the window
    double b_lo = 0.0, b_hi = 0.0;
    int n_points = 0;
};

// Power-law index of a CCDF from points produced by CcdfHistogram::fit_grid
// (or synthesized from an exact law). The window is anchored on CCDF levels
// [q_lo, q_hi]; points below min_bucket_count samples per bucket are cut.
// Throws EstimatorError when fewer than min_buckets usable points remain.
TailFit fit_tail_index(const std::vector<CcdfPoint>& grid, double q_hi = 1e-2,
                       double q_lo = 1e-5, int min_buckets = 8,
                       double min_bucket_count = 50.0);

struct LdFit {
    double rate = 0.0; // negated slope of log ccdf vs b
    double r2 = 0.0;
    double b_lo = 0.0, b_hi = 0.0;
    int n_points = 0;
};

// Exponential decay rate of a CCDF over integer levels b in [b_lo, b_hi].
// b_hi <= 0 picks the deepest level with at least min_count samples.
LdFit fit_ld_exponent(const std::vector<CcdfPoint>& grid, double b_lo,
                      double b_hi = 0.0, double min_count = 30.0);

// Running mean of X^c with log-spaced checkpoints. The verdict compares the
// mean's growth over the last two recorded decades against a flat trend:
// a diverging moment grows polynomially in n, a finite one settles.
class MomentProbe {
public:
    explicit MomentProbe(double exponent);

    void add(double x);

    struct Checkpoint {
        std::uint64_t n;
        double mean;
    };
    const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }
    double exponent() const { return c_; }
    std::uint64_t count() const { return n_; }
    double running_mean() const;

    enum class Verdict { Saturating, Diverging, Undetermined };
    Verdict verdict() const;
    static std::string verdict_name(Verdict v);

private:
    double c_;
    std::uint64_t n_ = 0;
    double sum_ = 0.0;
    std::uint64_t next_checkpoint_ = 10;
    std::vector<Checkpoint> checkpoints_;
};

} // namespace hqsim
