#include "hqsim/runner.hpp"

#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hqsim/threads.hpp"

namespace hqsim {

namespace {

using nlohmann::json;

SimConfig to_sim_config(const ExperimentConfig& cfg) {
    SimConfig sc;
    sc.light = cfg.light;
    sc.heavy = cfg.heavy;
    sc.policy = cfg.policy;
    sc.slots = cfg.slots;
    sc.burn_in = cfg.effective_burn_in();
    sc.seed = cfg.seed;
    sc.direct_cap = cfg.direct_cap;
    sc.track_hol = cfg.policy.kind == PolicyKind::PriorityH;
    return sc;
}

// JSON has no inf literal; predictions that mean "light tail" or "not
// applicable" serialize as a string.
json j_num(double v) {
    if (std::isfinite(v)) return json(v);
    return json(v > 0 ? "infinite" : "-infinite");
}

json tail_json(const TailFit& f) {
    return json{{"index", f.index},
                {"stderr", f.stderr_},
                {"hill_index", f.hill_index},
                {"hill_disagrees", f.hill_disagrees},
                {"curvature", f.curvature},
                {"b_lo", f.b_lo},
                {"b_hi", f.b_hi},
                {"n_points", f.n_points}};
}

json ld_json(const LdFit& f) {
    return json{{"rate", f.rate},
                {"r_squared", f.r2},
                {"b_lo", f.b_lo},
                {"b_hi", f.b_hi},
                {"n_points", f.n_points}};
}

json ccdf_json(const CcdfHistogram& h) {
    json pts = json::array();
    for (const auto& p : h.curve())
        pts.push_back(json::array({p.b, p.count_ge, p.ccdf}));
    return json{{"columns", json::array({"b", "count_ge", "ccdf"})},
                {"total", h.total()},
                {"points", std::move(pts)}};
}

BandCheck make_band(std::string name, double measured, double predicted,
                    double tol, bool available, std::string note = {}) {
    BandCheck b;
    b.name = std::move(name);
    b.measured = measured;
    b.predicted = predicted;
    b.tolerance = tol;
    b.available = available;
    b.pass = available && std::abs(measured - predicted) <= tol;
    b.note = std::move(note);
    return b;
}

// band width for a tail-index comparison; wider for larger predictions since
// deeper tails are thinner at fixed depth
double index_band(double predicted) { return std::max(0.35, 0.2 * predicted); }

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

} // namespace

SimResult run_replications(const ExperimentConfig& cfg, ExecMode mode) {
    const std::uint32_t reps = cfg.replications;
    std::vector<SimResult> parts(reps);
    const SimConfig base = to_sim_config(cfg);

    if (mode == ExecMode::Parallel && reps > 1) {
        std::exception_ptr err;
        const int workers = worker_count();
#pragma omp parallel for schedule(dynamic) num_threads(workers)
        for (std::int64_t r = 0; r < static_cast<std::int64_t>(reps); ++r) {
            try {
                SimConfig sc = base;
                sc.replication = static_cast<std::uint64_t>(r);
                parts[static_cast<std::size_t>(r)] = simulate(sc);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
    } else {
        for (std::uint32_t r = 0; r < reps; ++r) {
            SimConfig sc = base;
            sc.replication = r;
            parts[r] = simulate(sc);
        }
    }

    SimResult merged = std::move(parts[0]);
    for (std::uint32_t r = 1; r < reps; ++r) merged.merge(parts[r]);
    return merged;
}

double heavy_burst_index(const ArrivalSpec& spec) {
    if (const auto* p = std::get_if<DiscretePareto>(&spec.family)) return p->index;
    if (const auto* z = std::get_if<Zeta>(&spec.family)) return z->index;
    if (const auto* s = std::get_if<SlowVaryModulated>(&spec.family))
        return s->base ? heavy_burst_index(*s->base) : 0.0;
    return 0.0;
}

ArrivalSpec with_mean(const ArrivalSpec& spec, double target) {
    if (std::holds_alternative<Bernoulli>(spec.family)) return {Bernoulli{target}};
    if (std::holds_alternative<Poisson>(spec.family)) return {Poisson{target}};
    if (std::holds_alternative<GeometricBatch>(spec.family))
        return {GeometricBatch{target}};
    if (const auto* p = std::get_if<DiscretePareto>(&spec.family))
        return {DiscretePareto{p->index, target / zeta_fn(p->index)}};
    throw ConfigError("sweep: cannot re-tune family '" + family_name(spec)
                      + "' to a target mean");
}

RunSummary summarize(const ExperimentConfig& cfg, const SimResult& merged) {
    RunSummary s;
    s.config = cfg;
    s.sim = merged;
    const auto& est = cfg.estimator;

    try {
        s.tail_h = fit_tail_index(merged.hist_h.fit_grid(), est.tail_q_hi,
                                  est.tail_q_lo);
        s.have_tail_h = true;
    } catch (const EstimatorError& e) {
        s.tail_h_error = e.what();
    }
    try {
        s.tail_l = fit_tail_index(merged.hist_l.fit_grid(), est.tail_q_hi,
                                  est.tail_q_lo);
        s.have_tail_l = true;
    } catch (const EstimatorError& e) {
        s.tail_l_error = e.what();
    }
    try {
        s.ld_l = fit_ld_exponent(merged.hist_l.fit_grid(), est.ld_b_lo, est.ld_b_hi);
        s.have_ld_l = true;
    } catch (const EstimatorError& e) {
        s.ld_l_error = e.what();
    }

    s.heavy_index = heavy_burst_index(cfg.heavy);
    s.have_heavy_index = s.heavy_index > 1.0;
    if (s.have_heavy_index) {
        s.prediction = predict_tail_coefficient(cfg.policy, s.heavy_index);
        if (cfg.policy.kind == PolicyKind::LogMaxWeight
            && tail_class(cfg.light) == TailClass::Light) {
            s.lmw_rate = lmw_exponent(cfg.light, s.heavy_index);
            s.have_lmw_rate = true;
        }
    }

    const double lam_h = mean(cfg.heavy);
    const double lam_l = mean(cfg.light);
    s.bands.push_back(make_band("service_rate_h",
                                static_cast<double>(merged.served_h)
                                    / static_cast<double>(merged.slots),
                                lam_h, 0.01, merged.slots > 0,
                                "served fraction vs arrival rate"));
    s.bands.push_back(make_band("service_rate_l",
                                static_cast<double>(merged.served_l)
                                    / static_cast<double>(merged.slots),
                                lam_l, 0.01, merged.slots > 0,
                                "served fraction vs arrival rate"));
    if (cfg.policy.kind == PolicyKind::PriorityH)
        s.bands.push_back(make_band("busy_fraction_h", merged.busy_fraction_h(),
                                    lam_h, 0.01, merged.measured > 0,
                                    "decision-point busy fraction vs arrival "
                                    "rate under heavy priority"));
    if (s.have_heavy_index) {
        s.bands.push_back(make_band(
            "qh_tail_index", s.tail_h.index, s.prediction.q_h_coefficient,
            index_band(s.prediction.q_h_coefficient), s.have_tail_h,
            s.have_tail_h ? "" : s.tail_h_error));
        if (std::isfinite(s.prediction.q_l_coefficient))
            s.bands.push_back(make_band(
                "ql_tail_index", s.tail_l.index, s.prediction.q_l_coefficient,
                index_band(s.prediction.q_l_coefficient), s.have_tail_l,
                s.have_tail_l ? "" : s.tail_l_error));
    }
    if (s.have_lmw_rate)
        s.bands.push_back(make_band("ql_decay_rate", s.ld_l.rate, s.lmw_rate,
                                    0.2 * s.lmw_rate, s.have_ld_l,
                                    s.have_ld_l ? "" : s.ld_l_error));
    return s;
}

RunSummary run_experiment(const ExperimentConfig& cfg, ExecMode mode) {
    return summarize(cfg, run_replications(cfg, mode));
}

std::string summary_json(const RunSummary& s) {
    const SimResult& r = s.sim;
    json j;
    j["config"] = serialize_config(s.config);
    j["policy"] = policy_name(s.config.policy);
    j["seed"] = s.config.seed;
    j["replications"] = s.config.replications;
    j["slots_per_replication"] = s.config.slots;
    j["slots_total"] = r.slots;
    j["measured_slots"] = r.measured;

    j["busy_fraction_h"] = r.busy_fraction_h();
    j["busy_fraction_l"] = r.busy_fraction_l();
    j["mean_qh"] = r.mean_qh();
    j["mean_ql"] = r.mean_ql();
    j["mean_qh_halves"] = json::array(
        {r.measured_first ? r.sum_qh_first / static_cast<double>(r.measured_first) : 0.0,
         r.measured_second ? r.sum_qh_second / static_cast<double>(r.measured_second)
                           : 0.0});
    j["mean_ql_halves"] = json::array(
        {r.measured_first ? r.sum_ql_first / static_cast<double>(r.measured_first) : 0.0,
         r.measured_second ? r.sum_ql_second / static_cast<double>(r.measured_second)
                           : 0.0});
    j["served_h"] = r.served_h;
    j["served_l"] = r.served_l;
    j["arrived_h"] = r.arrived_h;
    j["arrived_l"] = r.arrived_l;
    if (r.dominance_checked > 0)
        j["dominance"] = json{{"checked", r.dominance_checked},
                              {"violations", r.dominance_violations}};

    j["ccdf_h"] = ccdf_json(r.hist_h);
    j["ccdf_l"] = ccdf_json(r.hist_l);
    if (r.hol_residual.total() > 0) {
        j["hol_residual"] = ccdf_json(r.hol_residual);
        j["hol_age"] = ccdf_json(r.hol_age);
    }

    json est;
    est["tail_h"] = s.have_tail_h ? tail_json(s.tail_h) : json{{"error", s.tail_h_error}};
    est["tail_l"] = s.have_tail_l ? tail_json(s.tail_l) : json{{"error", s.tail_l_error}};
    est["ld_l"] = s.have_ld_l ? ld_json(s.ld_l) : json{{"error", s.ld_l_error}};
    j["estimates"] = est;

    json pred;
    if (s.have_heavy_index) {
        pred["heavy_index"] = s.heavy_index;
        pred["qh_tail_index"] = j_num(s.prediction.q_h_coefficient);
        pred["ql_tail_index"] = j_num(s.prediction.q_l_coefficient);
        if (s.have_lmw_rate) pred["ql_decay_rate"] = j_num(s.lmw_rate);
    } else {
        pred["heavy_index"] = "not regularly varying";
    }
    j["predictions"] = pred;

    json bands = json::array();
    for (const auto& b : s.bands)
        bands.push_back(json{{"name", b.name},
                             {"measured", j_num(b.measured)},
                             {"predicted", j_num(b.predicted)},
                             {"tolerance", b.tolerance},
                             {"available", b.available},
                             {"pass", b.pass},
                             {"note", b.note}});
    j["bands"] = std::move(bands);
    return j.dump(2) + "\n";
}

void write_outputs(const RunSummary& s, const std::string& out_dir) {
    namespace fs = std::filesystem;
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_file(dir / "summary.json", summary_json(s));

    auto write_hist = [&](const char* name, const CcdfHistogram& h) {
        std::ostringstream os;
        h.write_csv(os);
        write_file(dir / name, os.str());
    };
    write_hist("ccdf_h.csv", s.sim.hist_h);
    write_hist("ccdf_l.csv", s.sim.hist_l);
    if (s.sim.hol_residual.total() > 0) {
        write_hist("hol_residual.csv", s.sim.hol_residual);
        write_hist("hol_age.csv", s.sim.hol_age);
    }
}

SweepTable sweep_alpha(const ExperimentConfig& base,
                       const std::vector<double>& ratios, ExecMode mode) {
    const double c_h = heavy_burst_index(base.heavy);
    if (!(c_h > 1.0))
        throw ConfigError("traffic.heavy.family: alpha sweep needs a regularly "
                          "varying heavy family with index > 1");
    SweepTable t;
    t.kind = "alpha";
    for (double ratio : ratios) {
        SweepRow row;
        row.x = ratio;
        row.regime = ratio <= 1.0 ? "flat" : "proportional";
        ExperimentConfig cfg = base;
        cfg.policy = Policy{PolicyKind::MaxWeightAlpha, 1.0, ratio};
        if (!(ratio > 0.0)) {
            row.flag = "ratio must be > 0";
            row.predicted = 0.0;
            t.rows.push_back(std::move(row));
            continue;
        }
        row.predicted = predict_tail_coefficient(cfg.policy, c_h).q_l_coefficient;
        try {
            validate_config(cfg);
            RunSummary s = run_experiment(cfg, mode);
            if (s.have_tail_l) {
                row.measured_ok = true;
                row.measured = s.tail_l.index;
                row.extra = s.tail_l.stderr_;
            } else {
                row.flag = s.tail_l_error;
            }
        } catch (const ConfigError& e) {
            row.flag = e.what();
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

SweepTable sweep_lambda(const ExperimentConfig& base,
                        const std::vector<double>& lambdas, ExecMode mode) {
    const double c_h = heavy_burst_index(base.heavy);
    if (!(c_h > 1.0))
        throw ConfigError("traffic.heavy.family: lambda sweep needs a regularly "
                          "varying heavy family with index > 1");
    const double lam_h = mean(base.heavy);
    SweepTable t;
    t.kind = "lambda";
    for (double lam : lambdas) {
        SweepRow row;
        row.x = lam;
        ExperimentConfig cfg = base;
        cfg.policy.kind = PolicyKind::LogMaxWeight;
        try {
            if (!(lam > 0.0)) throw ConfigError("lambda_l must be > 0");
            cfg.light = with_mean(base.light, lam);
            const double e_l = intrinsic_exponent(cfg.light).value;
            row.predicted = std::min(e_l, c_h - 1.0);
            row.regime = e_l < c_h - 1.0 ? "intrinsic" : "flat";
            if (!(lam + lam_h < 1.0))
                throw ConfigError("lambda_l + lambda_h = " + format_double(lam + lam_h)
                                  + " violates stability");
            validate_config(cfg);
            RunSummary s = run_experiment(cfg, mode);
            if (s.have_ld_l) {
                row.measured_ok = true;
                row.measured = s.ld_l.rate;
                row.extra = s.ld_l.r2;
            } else {
                row.flag = s.ld_l_error;
            }
        } catch (const ConfigError& e) {
            row.flag = e.what();
        } catch (const std::invalid_argument& e) {
            row.flag = e.what();
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_sweep_csv(const SweepTable& t, std::ostream& os) {
    const bool alpha = t.kind == "alpha";
    os << (alpha ? "ratio,predicted,measured,stderr,regime,flag\n"
                 : "lambda_l,predicted,measured,r_squared,regime,flag\n");
    for (const auto& row : t.rows) {
        os << format_double(row.x) << ',' << format_double(row.predicted) << ',';
        if (row.measured_ok)
            os << format_double(row.measured) << ',' << format_double(row.extra);
        else
            os << "nan,nan";
        std::string flag = row.flag;
        for (char& c : flag)
            if (c == ',' || c == '\n') c = ';';
        os << ',' << row.regime << ',' << flag << '\n';
    }
}

} // namespace hqsim
