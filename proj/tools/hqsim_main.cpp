#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hqsim/analysis.hpp"
#include "hqsim/config.hpp"
#include "hqsim/estimators.hpp"
#include "hqsim/runner.hpp"
#include "hqsim/validate.hpp"

namespace {

using namespace hqsim;

// frozen exit codes
constexpr int kOk = 0;
constexpr int kOtherError = 1;
constexpr int kConfigError = 2;
constexpr int kValidationFailure = 3;
constexpr int kEstimatorFailure = 4;

struct CommonOpts {
    std::string config_path;
    std::uint64_t seed = 0;
    std::uint64_t slots = 0;
    std::uint64_t replications = 0;
    std::string out;
    bool serial = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool config_required = true) {
    auto* c = cmd->add_option("--config", o.config_path, "experiment config file");
    if (config_required) c->required();
    cmd->add_option("--seed", o.seed, "override run.seed");
    cmd->add_option("--slots", o.slots, "override run.slots (per replication)");
    cmd->add_option("--replications", o.replications, "override run.replications");
    cmd->add_option("--out", o.out, "output directory (overrides run.out)");
    cmd->add_flag("--serial", o.serial, "run replications on one thread");
}

ExperimentConfig make_config(const CLI::App* cmd, const CommonOpts& o) {
    ExperimentConfig cfg = load_config(o.config_path);
    if (cmd->count("--seed")) cfg.seed = o.seed;
    if (cmd->count("--slots")) cfg.slots = o.slots;
    if (cmd->count("--replications")) {
        if (o.replications == 0 || o.replications > 0xffffffffULL)
            throw ConfigError("--replications: must be in [1, 2^32)");
        cfg.replications = static_cast<std::uint32_t>(o.replications);
    }
    if (cmd->count("--out")) cfg.out_dir = o.out;
    validate_config(cfg);
    return cfg;
}

std::string fit_line(bool have, const TailFit& f, const std::string& err) {
    if (!have) return "unavailable (" + err + ")";
    std::ostringstream os;
    os << format_double(f.index) << " +- " << format_double(f.stderr_) << "  [b "
       << format_double(f.b_lo) << ".." << format_double(f.b_hi) << ", "
       << f.n_points << " pts, hill " << format_double(f.hill_index) << "]";
    if (f.curvature) os << "  (log-log curvature: not a clean power law)";
    return os.str();
}

int cmd_simulate(const CLI::App* cmd, const CommonOpts& o, bool require_fits) {
    const ExperimentConfig cfg = make_config(cmd, o);
    const RunSummary s =
        run_experiment(cfg, o.serial ? ExecMode::Serial : ExecMode::Parallel);
    const SimResult& r = s.sim;

    std::cout << "policy            " << policy_name(cfg.policy) << '\n'
              << "slots             " << cfg.replications << " x " << cfg.slots
              << " (burn-in " << cfg.effective_burn_in() << " each)\n"
              << "busy fraction     H " << format_double(r.busy_fraction_h())
              << "   L " << format_double(r.busy_fraction_l()) << '\n'
              << "mean queue        H " << format_double(r.mean_qh()) << "   L "
              << format_double(r.mean_ql()) << '\n'
              << "tail index q_H    " << fit_line(s.have_tail_h, s.tail_h, s.tail_h_error)
              << '\n'
              << "tail index q_L    " << fit_line(s.have_tail_l, s.tail_l, s.tail_l_error)
              << '\n';
    if (s.have_ld_l)
        std::cout << "decay rate q_L    " << format_double(s.ld_l.rate) << "  [r^2 "
                  << format_double(s.ld_l.r2) << ", b " << format_double(s.ld_l.b_lo)
                  << ".." << format_double(s.ld_l.b_hi) << "]\n";
    if (r.dominance_checked)
        std::cout << "dominance         " << r.dominance_violations << " violations / "
                  << r.dominance_checked << " slots\n";
    for (const auto& b : s.bands) {
        std::cout << "band " << b.name << "  ";
        if (!b.available)
            std::cout << "UNAVAILABLE (" << b.note << ")";
        else
            std::cout << (b.pass ? "PASS" : "FAIL") << "  measured "
                      << format_double(b.measured) << " vs " << format_double(b.predicted)
                      << " +- " << format_double(b.tolerance);
        std::cout << '\n';
    }

    if (!cfg.out_dir.empty()) {
        write_outputs(s, cfg.out_dir);
        std::cout << "wrote " << cfg.out_dir << "/summary.json (+ ccdf csv)\n";
    }

    if (require_fits) {
        if (!s.have_tail_h)
            throw EstimatorError("q_h tail fit required: " + s.tail_h_error);
        if (s.have_heavy_index && std::isfinite(s.prediction.q_l_coefficient)
            && !s.have_tail_l)
            throw EstimatorError("q_l tail fit required: " + s.tail_l_error);
        if (cfg.policy.kind == PolicyKind::LogMaxWeight && !s.have_ld_l)
            throw EstimatorError("q_l decay fit required: " + s.ld_l_error);
    }
    return kOk;
}

int cmd_exponent(const CLI::App* cmd, const CommonOpts& o) {
    ExperimentConfig cfg = load_config(o.config_path);
    if (cmd->count("--out")) cfg.out_dir = o.out;
    try {
        validate_spec(cfg.light, "traffic.light");
        validate_spec(cfg.heavy, "traffic.heavy");
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    nlohmann::json j;
    j["light_family"] = family_name(cfg.light);
    j["light_mean"] = mean(cfg.light);
    ExponentResult er;
    try {
        er = intrinsic_exponent(cfg.light);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("traffic.light: ") + e.what());
    }
    auto num = [](double v) {
        return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json("infinite");
    };
    j["intrinsic_exponent"] = {{"value", num(er.value)},
                               {"sup_form", num(er.sup_form)},
                               {"inf_form", num(er.inf_form)},
                               {"light", er.light()}};
    std::cout << "light family        " << family_name(cfg.light) << " (mean "
              << format_double(mean(cfg.light)) << ")\n"
              << "intrinsic exponent  " << format_double(er.value) << "  (sup form "
              << format_double(er.sup_form) << ", inf form " << format_double(er.inf_form)
              << ")\n";

    const double c_h = heavy_burst_index(cfg.heavy);
    if (c_h > 1.0) {
        const TailPrediction p = predict_tail_coefficient(cfg.policy, c_h);
        j["heavy_index"] = c_h;
        j["policy"] = policy_name(cfg.policy);
        j["qh_tail_index"] = num(p.q_h_coefficient);
        j["ql_tail_index"] = num(p.q_l_coefficient);
        std::cout << "heavy burst index   " << format_double(c_h) << '\n'
                  << "policy              " << policy_name(cfg.policy) << '\n'
                  << "predicted q_H tail  " << format_double(p.q_h_coefficient) << '\n'
                  << "predicted q_L tail  "
                  << (std::isfinite(p.q_l_coefficient)
                          ? format_double(p.q_l_coefficient)
                          : std::string("light"))
                  << '\n';
        const double rate = lmw_exponent(cfg.light, c_h);
        j["lmw_decay_rate"] = num(rate);
        std::cout << "log-max-weight rate " << format_double(rate)
                  << "  (min of intrinsic exponent and heavy index - 1)\n";
    } else {
        j["heavy_index"] = "not regularly varying";
    }

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        std::ofstream f(std::filesystem::path(cfg.out_dir) / "exponent.json");
        f << j.dump(2) << '\n';
        std::cout << "wrote " << cfg.out_dir << "/exponent.json\n";
    }
    return kOk;
}

int cmd_sweep(const CLI::App* cmd, const CommonOpts& o, bool alpha,
              const std::vector<double>& xs) {
    ExperimentConfig cfg = make_config(cmd, o);
    const SweepTable t =
        alpha ? sweep_alpha(cfg, xs, o.serial ? ExecMode::Serial : ExecMode::Parallel)
              : sweep_lambda(cfg, xs, o.serial ? ExecMode::Serial : ExecMode::Parallel);
    write_sweep_csv(t, std::cout);
    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        const std::string name = alpha ? "sweep_alpha.csv" : "sweep_lambda.csv";
        std::ofstream f(std::filesystem::path(cfg.out_dir) / name);
        write_sweep_csv(t, f);
        std::cout << "wrote " << cfg.out_dir << "/" << name << '\n';
    }
    return kOk;
}

int cmd_validate(std::uint64_t slots, std::uint64_t seed, bool serial) {
    const ValidationReport r = run_validation(slots, seed, !serial);
    print_report(r, std::cout);
    return r.all_pass() ? kOk : kValidationFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-queue (heavy + light) single-server scheduling simulator"};
    app.require_subcommand(1);

    CommonOpts sim_o, exp_o, sa_o, sl_o;
    bool require_fits = false;
    std::vector<double> ratios{0.5, 1.0, 2.0};
    std::vector<double> lambdas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    std::uint64_t val_slots = 1000000, val_seed = 1;
    bool val_serial = false;

    auto* sim = app.add_subcommand("simulate", "run one experiment and summarize it");
    add_common(sim, sim_o);
    sim->add_flag("--require-fits", require_fits,
                  "exit 4 when a fit needed by this config's predictions is "
                  "unavailable at depth");

    auto* exp = app.add_subcommand(
        "exponent", "analytic exponents and tail predictions for a config");
    add_common(exp, exp_o);

    auto* sa = app.add_subcommand(
        "sweep-alpha", "q_l tail index vs max-weight exponent ratio alpha_l/alpha_h");
    add_common(sa, sa_o);
    sa->add_option("--ratios", ratios, "alpha_l/alpha_h values");

    auto* sl = app.add_subcommand(
        "sweep-lambda", "q_l decay rate vs light rate under log-max-weight");
    add_common(sl, sl_o);
    sl->add_option("--lambdas", lambdas, "light arrival rates");

    auto* val = app.add_subcommand("validate", "cross-module invariant suite");
    val->add_option("--slots", val_slots, "depth of the simulated checks");
    val->add_option("--seed", val_seed, "base seed");
    val->add_flag("--serial", val_serial, "single-threaded");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (app.got_subcommand(sim)) return cmd_simulate(sim, sim_o, require_fits);
        if (app.got_subcommand(exp)) return cmd_exponent(exp, exp_o);
        if (app.got_subcommand(sa)) return cmd_sweep(sa, sa_o, true, ratios);
        if (app.got_subcommand(sl)) return cmd_sweep(sl, sl_o, false, lambdas);
        if (app.got_subcommand(val)) return cmd_validate(val_slots, val_seed, val_serial);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const EstimatorError& e) {
        std::cerr << "estimator error: " << e.what() << '\n';
        return kEstimatorFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOtherError;
    }
    return kOtherError;
}
