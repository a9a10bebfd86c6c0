#include "hqsim/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace hqsim {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// key -> value store with consumption tracking so leftovers are reported.
class Kv {
  public:
    explicit Kv(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno)
                                  + ": expected 'key = value', got '" + line + "'");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty key");
            if (value.empty())
                throw ConfigError(key + ": empty value");
            if (!kv_.emplace(key, value).second)
                throw ConfigError(key + ": duplicate key");
        }
    }

    std::string take(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw ConfigError(key + ": missing required key");
        std::string v = std::move(it->second);
        kv_.erase(it);
        return v;
    }

    std::optional<std::string> take_opt(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return std::nullopt;
        std::string v = std::move(it->second);
        kv_.erase(it);
        return v;
    }

    void finish() const {
        if (!kv_.empty()) throw ConfigError(kv_.begin()->first + ": unknown key");
    }

  private:
    std::map<std::string, std::string> kv_;
};

double to_double(const std::string& key, const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last)
        throw ConfigError(key + ": not a number: '" + s + "'");
    return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ConfigError(key + ": not a non-negative integer: '" + s + "'");
    return v;
}

std::int64_t to_i64(const std::string& key, const std::string& s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ConfigError(key + ": not an integer: '" + s + "'");
    return v;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

ArrivalSpec parse_spec(Kv& kv, const std::string& prefix) {
    const std::string fam = kv.take(prefix + "family");
    if (fam == "bernoulli")
        return {Bernoulli{to_double(prefix + "p", kv.take(prefix + "p"))}};
    if (fam == "poisson")
        return {Poisson{to_double(prefix + "rate", kv.take(prefix + "rate"))}};
    if (fam == "geometric_batch")
        return {GeometricBatch{to_double(prefix + "mean", kv.take(prefix + "mean"))}};
    if (fam == "discrete_pareto") {
        double index = to_double(prefix + "index", kv.take(prefix + "index"));
        auto scale_s = kv.take_opt(prefix + "scale");
        auto mean_s = kv.take_opt(prefix + "mean");
        if (scale_s && mean_s)
            throw ConfigError(prefix + "scale: give scale or mean, not both");
        double scale = 1.0;
        if (scale_s) {
            scale = to_double(prefix + "scale", *scale_s);
        } else if (mean_s) {
            if (!(index > 1.0))
                throw ConfigError(prefix + "mean: rate-tuning needs index > 1");
            scale = to_double(prefix + "mean", *mean_s) / zeta_fn(index);
        }
        return {DiscretePareto{index, scale}};
    }
    if (fam == "zeta")
        return {Zeta{to_double(prefix + "index", kv.take(prefix + "index"))}};
    if (fam == "tabulated") {
        TabulatedPmf t;
        for (const auto& tok : split_ws(kv.take(prefix + "values")))
            t.values.push_back(to_i64(prefix + "values", tok));
        for (const auto& tok : split_ws(kv.take(prefix + "probs")))
            t.probs.push_back(to_double(prefix + "probs", tok));
        if (t.values.size() != t.probs.size())
            throw ConfigError(prefix + "probs: length differs from " + prefix + "values");
        return {std::move(t)};
    }
    if (fam == "slow_vary") {
        SlowVaryModulated f;
        if (auto s = kv.take_opt(prefix + "sv_power"))
            f.sv_power = to_double(prefix + "sv_power", *s);
        if (auto s = kv.take_opt(prefix + "n_max"))
            f.n_max = to_i64(prefix + "n_max", *s);
        f.base = std::make_shared<const ArrivalSpec>(parse_spec(kv, prefix + "base."));
        return {std::move(f)};
    }
    throw ConfigError(prefix + "family: unknown family '" + fam
                      + "' (bernoulli, poisson, geometric_batch, discrete_pareto, "
                        "zeta, tabulated, slow_vary)");
}

void serialize_spec(std::ostream& os, const ArrivalSpec& spec, const std::string& prefix) {
    std::visit(
        overloaded{
            [&](const Bernoulli& f) {
                os << prefix << "family = bernoulli\n"
                   << prefix << "p = " << format_double(f.p) << '\n';
            },
            [&](const Poisson& f) {
                os << prefix << "family = poisson\n"
                   << prefix << "rate = " << format_double(f.rate) << '\n';
            },
            [&](const GeometricBatch& f) {
                os << prefix << "family = geometric_batch\n"
                   << prefix << "mean = " << format_double(f.mean) << '\n';
            },
            [&](const DiscretePareto& f) {
                os << prefix << "family = discrete_pareto\n"
                   << prefix << "index = " << format_double(f.index) << '\n'
                   << prefix << "scale = " << format_double(f.scale) << '\n';
            },
            [&](const Zeta& f) {
                os << prefix << "family = zeta\n"
                   << prefix << "index = " << format_double(f.index) << '\n';
            },
            [&](const TabulatedPmf& f) {
                os << prefix << "family = tabulated\n" << prefix << "values =";
                for (auto v : f.values) os << ' ' << v;
                os << '\n' << prefix << "probs =";
                for (auto p : f.probs) os << ' ' << format_double(p);
                os << '\n';
            },
            [&](const SlowVaryModulated& f) {
                os << prefix << "family = slow_vary\n"
                   << prefix << "sv_power = " << format_double(f.sv_power) << '\n'
                   << prefix << "n_max = " << f.n_max << '\n';
                serialize_spec(os, *f.base, prefix + "base.");
            },
        },
        spec.family);
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

bool spec_equal(const ArrivalSpec& a, const ArrivalSpec& b) {
    if (a.family.index() != b.family.index()) return false;
    return std::visit(
        overloaded{
            [&](const Bernoulli& x) { return x.p == std::get<Bernoulli>(b.family).p; },
            [&](const Poisson& x) { return x.rate == std::get<Poisson>(b.family).rate; },
            [&](const GeometricBatch& x) {
                return x.mean == std::get<GeometricBatch>(b.family).mean;
            },
            [&](const DiscretePareto& x) {
                const auto& y = std::get<DiscretePareto>(b.family);
                return x.index == y.index && x.scale == y.scale;
            },
            [&](const Zeta& x) { return x.index == std::get<Zeta>(b.family).index; },
            [&](const TabulatedPmf& x) {
                const auto& y = std::get<TabulatedPmf>(b.family);
                return x.values == y.values && x.probs == y.probs;
            },
            [&](const SlowVaryModulated& x) {
                const auto& y = std::get<SlowVaryModulated>(b.family);
                if (x.sv_power != y.sv_power || x.n_max != y.n_max) return false;
                if (!x.base || !y.base) return x.base == y.base;
                return spec_equal(*x.base, *y.base);
            },
        },
        a.family);
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return spec_equal(a.light, b.light) && spec_equal(a.heavy, b.heavy)
           && a.policy == b.policy && a.slots == b.slots && a.burn_in == b.burn_in
           && a.seed == b.seed && a.replications == b.replications
           && a.direct_cap == b.direct_cap && a.estimator == b.estimator
           && a.out_dir == b.out_dir;
}

ExperimentConfig parse_config(const std::string& text) {
    Kv kv(text);
    ExperimentConfig c;
    c.light = parse_spec(kv, "traffic.light.");
    c.heavy = parse_spec(kv, "traffic.heavy.");

    const std::string kind = kv.take("policy.kind");
    if (kind == "priority_h") c.policy.kind = PolicyKind::PriorityH;
    else if (kind == "priority_l") c.policy.kind = PolicyKind::PriorityL;
    else if (kind == "max_weight_alpha") c.policy.kind = PolicyKind::MaxWeightAlpha;
    else if (kind == "log_max_weight") c.policy.kind = PolicyKind::LogMaxWeight;
    else
        throw ConfigError("policy.kind: unknown policy '" + kind
                          + "' (priority_h, priority_l, max_weight_alpha, "
                            "log_max_weight)");
    if (auto s = kv.take_opt("policy.alpha_h")) c.policy.alpha_h = to_double("policy.alpha_h", *s);
    if (auto s = kv.take_opt("policy.alpha_l")) c.policy.alpha_l = to_double("policy.alpha_l", *s);

    if (auto s = kv.take_opt("run.slots")) c.slots = to_u64("run.slots", *s);
    if (auto s = kv.take_opt("run.burn_in"))
        c.burn_in = *s == "auto" ? kBurnInAuto : to_u64("run.burn_in", *s);
    if (auto s = kv.take_opt("run.seed")) c.seed = to_u64("run.seed", *s);
    if (auto s = kv.take_opt("run.replications")) {
        std::uint64_t r = to_u64("run.replications", *s);
        if (r > 0xffffffffULL) throw ConfigError("run.replications: too large");
        c.replications = static_cast<std::uint32_t>(r);
    }
    if (auto s = kv.take_opt("run.direct_cap")) c.direct_cap = to_i64("run.direct_cap", *s);
    if (auto s = kv.take_opt("run.out")) c.out_dir = *s;

    if (auto s = kv.take_opt("estimator.tail_q_hi"))
        c.estimator.tail_q_hi = to_double("estimator.tail_q_hi", *s);
    if (auto s = kv.take_opt("estimator.tail_q_lo"))
        c.estimator.tail_q_lo = to_double("estimator.tail_q_lo", *s);
    if (auto s = kv.take_opt("estimator.ld_b_lo"))
        c.estimator.ld_b_lo = to_double("estimator.ld_b_lo", *s);
    if (auto s = kv.take_opt("estimator.ld_b_hi"))
        c.estimator.ld_b_hi = *s == "auto" ? 0.0 : to_double("estimator.ld_b_hi", *s);

    kv.finish();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream os;
    serialize_spec(os, c.light, "traffic.light.");
    serialize_spec(os, c.heavy, "traffic.heavy.");
    os << "policy.kind = ";
    switch (c.policy.kind) {
    case PolicyKind::PriorityH: os << "priority_h"; break;
    case PolicyKind::PriorityL: os << "priority_l"; break;
    case PolicyKind::MaxWeightAlpha: os << "max_weight_alpha"; break;
    case PolicyKind::LogMaxWeight: os << "log_max_weight"; break;
    }
    os << '\n';
    os << "policy.alpha_h = " << format_double(c.policy.alpha_h) << '\n';
    os << "policy.alpha_l = " << format_double(c.policy.alpha_l) << '\n';
    os << "run.slots = " << c.slots << '\n';
    os << "run.burn_in = ";
    if (c.burn_in == kBurnInAuto) os << "auto";
    else os << c.burn_in;
    os << '\n';
    os << "run.seed = " << c.seed << '\n';
    os << "run.replications = " << c.replications << '\n';
    os << "run.direct_cap = " << c.direct_cap << '\n';
    if (!c.out_dir.empty()) os << "run.out = " << c.out_dir << '\n';
    os << "estimator.tail_q_hi = " << format_double(c.estimator.tail_q_hi) << '\n';
    os << "estimator.tail_q_lo = " << format_double(c.estimator.tail_q_lo) << '\n';
    os << "estimator.ld_b_lo = " << format_double(c.estimator.ld_b_lo) << '\n';
    os << "estimator.ld_b_hi = " << format_double(c.estimator.ld_b_hi) << '\n';
    return os.str();
}

void validate_config(const ExperimentConfig& c) {
    try {
        validate_spec(c.light, "traffic.light");
        validate_spec(c.heavy, "traffic.heavy");
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (tail_class(c.light) != TailClass::Light)
        throw ConfigError("traffic.light.family: the light stream must be "
                          "light-tailed (finite log-MGF near 0)");
    const double total = mean(c.light) + mean(c.heavy);
    if (!(total < 1.0))
        throw ConfigError("traffic: total input rate " + format_double(total)
                          + " overwhelms the unit-rate server "
                            "(need lambda_L + lambda_H < 1)");
    if (c.policy.kind == PolicyKind::MaxWeightAlpha) {
        if (!(c.policy.alpha_h > 0.0)) throw ConfigError("policy.alpha_h: must be > 0");
        if (!(c.policy.alpha_l > 0.0)) throw ConfigError("policy.alpha_l: must be > 0");
    }
    if (c.slots == 0) throw ConfigError("run.slots: must be >= 1");
    if (c.effective_burn_in() >= c.slots)
        throw ConfigError("run.burn_in: must be < run.slots");
    if (c.replications < 1) throw ConfigError("run.replications: must be >= 1");
    if (c.direct_cap < 1) throw ConfigError("run.direct_cap: must be >= 1");
    const auto& e = c.estimator;
    if (!(e.tail_q_lo > 0.0 && e.tail_q_lo < e.tail_q_hi && e.tail_q_hi <= 1.0))
        throw ConfigError("estimator.tail_q_lo: need 0 < tail_q_lo < tail_q_hi <= 1");
    if (!(e.ld_b_lo >= 0.0)) throw ConfigError("estimator.ld_b_lo: must be >= 0");
    if (e.ld_b_hi != 0.0 && !(e.ld_b_hi > e.ld_b_lo))
        throw ConfigError("estimator.ld_b_hi: must be 0 (auto) or > ld_b_lo");
}

} // namespace hqsim
