#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hqsim/analysis.hpp"
#include "hqsim/config.hpp"
#include "hqsim/estimators.hpp"
#include "hqsim/simulate.hpp"

namespace hqsim {

enum class ExecMode { Serial, Parallel };

// All replications of one config, merged in replication index order.
// Replication r draws from rng streams (seed, 2r) and (seed, 2r+1); the
// parallel path distributes replications across the worker pool and merges
// identically, so both modes return bit-identical results.
SimResult run_replications(const ExperimentConfig& cfg, ExecMode mode);

// One measurement-vs-prediction comparison attached to a summary.
struct BandCheck {
    std::string name;
    double measured = 0.0;
    double predicted = 0.0;
    double tolerance = 0.0; // absolute
    bool available = false; // measurement exists at this depth
    bool pass = false;
    std::string note;
};

struct RunSummary {
    ExperimentConfig config;
    SimResult sim;

    bool have_tail_h = false, have_tail_l = false, have_ld_l = false;
    TailFit tail_h{}, tail_l{};
    LdFit ld_l{};
    std::string tail_h_error, tail_l_error, ld_l_error;

    bool have_heavy_index = false; // heavy family is regularly varying
    double heavy_index = 0.0;
    TailPrediction prediction{}; // meaningful when have_heavy_index
    bool have_lmw_rate = false;
    double lmw_rate = kInf;

    std::vector<BandCheck> bands;
};

// Post-run analysis: tail/exponent fits (failures recorded as flags, never
// thrown), predictions, and the band comparisons.
RunSummary summarize(const ExperimentConfig& cfg, const SimResult& merged);

RunSummary run_experiment(const ExperimentConfig& cfg, ExecMode mode);

std::string summary_json(const RunSummary& s);

// summary.json + ccdf_h.csv/ccdf_l.csv (+ hol_residual.csv/hol_age.csv when
// head-of-line tracking ran). Creates out_dir if needed.
void write_outputs(const RunSummary& s, const std::string& out_dir);

struct SweepRow {
    double x = 0.0;         // alpha ratio, or lambda_l
    double predicted = 0.0; // tail index, or decay rate
    bool measured_ok = false;
    double measured = 0.0;
    double extra = 0.0;  // stderr (alpha sweep) or r^2 (lambda sweep)
    std::string regime;  // "flat" / "proportional" / "intrinsic"
    std::string flag;    // estimator or stability failure, empty when ok
};

struct SweepTable {
    std::string kind; // "alpha" | "lambda"
    std::vector<SweepRow> rows;
};

// q_l tail index under max-weight with alpha_h = 1, alpha_l = ratio, one row
// per ratio; estimator failures are flagged per row, never abort the sweep.
SweepTable sweep_alpha(const ExperimentConfig& base,
                       const std::vector<double>& ratios, ExecMode mode);

// q_l decay rate under log-max-weight as the light rate sweeps; the light
// family keeps its shape and is re-tuned to each mean.
SweepTable sweep_lambda(const ExperimentConfig& base,
                        const std::vector<double>& lambdas, ExecMode mode);

void write_sweep_csv(const SweepTable& t, std::ostream& os);

// Power-law index of the heavy family's burst CCDF; 0 when the family is not
// regularly varying (bounded or tabulated laws).
double heavy_burst_index(const ArrivalSpec& spec);

// Same-shape spec with its mean moved to target (sweep support).
ArrivalSpec with_mean(const ArrivalSpec& spec, double target);

} // namespace hqsim
