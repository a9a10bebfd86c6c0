// Acceptance gate: one end-to-end criterion per invocation, selected by the
// single integer argument (1..10). Each prints exactly one PASS/FAIL line.
// Tolerances are fixed here, not configurable.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hqsim/analysis.hpp"
#include "hqsim/arrival.hpp"
#include "hqsim/config.hpp"
#include "hqsim/estimators.hpp"
#include "hqsim/oracle.hpp"
#include "hqsim/policy.hpp"
#include "hqsim/renewal.hpp"
#include "hqsim/rng.hpp"
#include "hqsim/runner.hpp"
#include "hqsim/simulate.hpp"

using namespace hqsim;

namespace {

ArrivalSpec pareto_mean(double index, double target_mean) {
    return ArrivalSpec{DiscretePareto{index, target_mean / zeta_fn(index)}};
}

Policy mw(double ah, double al) {
    return Policy{PolicyKind::MaxWeightAlpha, ah, al};
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------- criterion 1

// Stationary renewal identities, re-derived here from the raw pmf with
// independent suffix sums, plus the long-horizon renewal walk.
bool criterion1(std::string& out) {
    std::vector<std::pair<std::string, Pmf>> laws;
    auto add = [&](const char* name, std::vector<double> p) {
        Pmf m;
        m.p = std::move(p);
        laws.emplace_back(name, std::move(m));
    };
    add("det4", {0, 0, 0, 0, 1});
    add("uniform12", {0, 0.5, 0.5});
    add("uniform123", {0, 1.0 / 3, 1.0 / 3, 1.0 / 3});
    laws.emplace_back("geometric40",
                      positive_part(ArrivalSpec{GeometricBatch{1.0}}, 40));
    laws.emplace_back("pareto25",
                      positive_part(pareto_mean(2.5, 0.25), 10000));
    laws.emplace_back("poisson05", positive_part(ArrivalSpec{Poisson{0.5}}, 100));

    double worst = 0.0;
    std::string worst_law;
    auto note = [&](double d, const std::string& name) {
        if (d > worst) {
            worst = d;
            worst_law = name;
        }
    };

    for (const auto& [name, plus] : laws) {
        const RenewalTables t = renewal_tables(plus);
        const auto& p = plus.p;
        const std::int64_t n = plus.n_max();

        // independent tails and mean, compensated so this reference arithmetic
        // stays a decade below the 1e-12 bound even on the 1e4-point law
        auto suffix_sums = [](auto term, std::int64_t top) {
            std::vector<double> out(static_cast<std::size_t>(top) + 2, 0.0);
            double s = 0.0, c = 0.0;
            for (std::int64_t k = top; k >= 0; --k) {
                const double y = term(k) - c;
                const double v = s + y;
                c = (v - s) - y;
                s = v;
                out[static_cast<std::size_t>(k)] = s;
            }
            return out;
        };
        // tail[k] = P{H+ >= k}; tail2[k] = sum_{j>=k} tail[j]
        const std::vector<double> tail =
            suffix_sums([&](std::int64_t k) { return p[static_cast<std::size_t>(k)]; }, n);
        const std::vector<double> tail2 =
            suffix_sums([&](std::int64_t k) { return tail[static_cast<std::size_t>(k)]; }, n);
        const double m = suffix_sums(
            [&](std::int64_t k) {
                return static_cast<double>(k) * p[static_cast<std::size_t>(k)];
            },
            n)[0];

        double s_res = 0.0, s_age = 0.0, s_dur = 0.0;
        for (std::int64_t k = 1; k <= n; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            note(std::abs(t.residual[ku] * m - tail[ku]), name + "/residual");
            note(std::abs(t.duration[ku] * m - static_cast<double>(k) * p[ku]),
                 name + "/duration");
            // residual at k and age at k-1 describe the same cycle position
            note(std::abs(t.residual[ku] - t.age[ku - 1]), name + "/exchange");
            s_res += t.residual[ku];
            s_dur += t.duration[ku];
        }
        for (std::int64_t l = 0; l <= n; ++l) {
            const auto lu = static_cast<std::size_t>(l);
            note(std::abs(t.age[lu] * m - tail[lu + 1]), name + "/age");
            s_age += t.age[lu];
        }
        note(std::abs(s_res - 1.0), name + "/residual-norm");
        note(std::abs(s_age - 1.0), name + "/age-norm");
        note(std::abs(s_dur - 1.0), name + "/duration-norm");

        for (std::int64_t k = 1; k <= std::min<std::int64_t>(n, 12); ++k)
            for (std::int64_t l = 0; k + l <= std::min<std::int64_t>(n, 24); ++l)
                note(std::abs(t.joint(k, l) * m - p[static_cast<std::size_t>(k + l)]),
                     name + "/joint");

        // two-sided tail collapses to a one-dimensional residual tail
        const std::int64_t probe = std::min<std::int64_t>(n, 10);
        for (std::int64_t mm = 1; mm <= probe; ++mm)
            for (std::int64_t nn = 0; nn <= probe; ++nn) {
                double direct;
                if (n <= 512) {
                    // explicit double sum, Kahan-compensated to keep the
                    // cross-check noise well under the 1e-12 bound
                    double s = 0.0, c = 0.0;
                    for (std::int64_t k = mm; k <= n; ++k)
                        for (std::int64_t l = nn; l + k <= n; ++l) {
                            const double y = t.joint(k, l) - c;
                            const double v = s + y;
                            c = (v - s) - y;
                            s = v;
                        }
                    direct = s;
                } else {
                    // diagonals of the joint sum telescope: each duration d
                    // contributes (d - s + 1) copies of p[d], a tail of tails
                    direct = tail2[static_cast<std::size_t>(mm + nn)] / m;
                }
                note(std::abs(t.joint_tail(mm, nn) - direct), name + "/joint-tail");
                note(std::abs(t.joint_tail(mm, nn) - t.residual_ccdf(mm + nn - 1)),
                     name + "/tail-collapse");
            }
    }
    const bool exact_ok = worst <= 1e-12;

    // renewal walk vs the closed forms at horizon 1e7
    double walk_worst = 0.0;
    for (const char* name : {"uniform123", "det4", "geometric40"}) {
        const auto it = std::find_if(laws.begin(), laws.end(),
                                     [&](const auto& l) { return l.first == name; });
        const RenewalTables t = renewal_tables(it->second);
        const auto e = renewal_enumeration(it->second, 10000000);
        for (std::int64_t k = 1; k <= it->second.n_max(); ++k)
            walk_worst = std::max(walk_worst,
                                  std::abs(e.residual[static_cast<std::size_t>(k)]
                                           - t.residual[static_cast<std::size_t>(k)]));
        for (std::int64_t l = 0; l < it->second.n_max(); ++l)
            walk_worst = std::max(walk_worst,
                                  std::abs(e.age[static_cast<std::size_t>(l)]
                                           - t.age[static_cast<std::size_t>(l)]));
    }
    const bool walk_ok = walk_worst <= 1e-3;

    out = "identity defect " + fmt(worst) + " (worst " + worst_law
          + ", bound 1e-12) on " + std::to_string(laws.size())
          + " laws; walk gap " + fmt(walk_worst) + " (bound 1e-3)";
    return exact_ok && walk_ok;
}

// ---------------------------------------------------------------- criterion 2

bool criterion2(std::string& out) {
    double worst_gap = 0.0;
    bool ok = true;
    int finite = 0, infinite = 0;
    for (int i = 1; i <= 9; ++i) {
        const double lam = static_cast<double>(i) / 10.0;
        const ArrivalSpec fams[] = {ArrivalSpec{Bernoulli{lam}},
                                    ArrivalSpec{Poisson{lam}},
                                    ArrivalSpec{GeometricBatch{lam}}};
        for (const auto& f : fams) {
            const ExponentResult r = intrinsic_exponent(f);
            if (r.sup_form == kInf || r.inf_form == kInf) {
                ok = ok && r.sup_form == r.inf_form;
                ++infinite;
            } else {
                worst_gap = std::max(worst_gap, std::abs(r.sup_form - r.inf_form));
                ++finite;
            }
        }
    }
    ok = ok && worst_gap <= 1e-6;

    const ExponentResult g = intrinsic_exponent(ArrivalSpec{GeometricBatch{0.5}});
    const double ln2_gap = std::abs(g.value - std::log(2.0));
    ok = ok && ln2_gap <= 1e-6;

    out = "sup/inf gap " + fmt(worst_gap) + " over " + std::to_string(finite)
          + " finite + " + std::to_string(infinite)
          + " infinite cases (bound 1e-6); geometric(0.5) vs ln2 gap " + fmt(ln2_gap);
    return ok;
}

// ---------------------------------------------------------------- criterion 3

bool criterion3(std::string& out) {
    const Policy pols[] = {mw(1, 1), mw(1, 2), mw(2, 1),
                           Policy{PolicyKind::LogMaxWeight}};
    std::uint64_t checked = 0, violations = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        for (const Policy& pol : pols) {
            SimConfig sc;
            sc.light = ArrivalSpec{Poisson{0.5}};
            sc.heavy = pareto_mean(2.5, 0.25);
            sc.policy = pol;
            sc.slots = 100000;
            sc.seed = seed;
            sc.coupled = true;
            const SimResult r = simulate(sc);
            checked += r.dominance_checked;
            violations += r.dominance_violations;
        }
    }
    out = std::to_string(violations) + " dominance violations in "
          + std::to_string(checked) + " checked slots (100 seeds x 4 policies)";
    return violations == 0 && checked == 100ull * 4 * 100000;
}

// ------------------------------------------------------------ criteria 4 & 5

SimResult heavy_priority_run() {
    SimConfig sc;
    sc.light = ArrivalSpec{Poisson{0.3}};
    sc.heavy = pareto_mean(2.5, 0.3);
    sc.policy = Policy{PolicyKind::PriorityH};
    sc.slots = 10000000;
    sc.burn_in = 100000;
    sc.seed = 1;
    return simulate(sc);
}

bool criterion4(std::string& out) {
    const SimResult r = heavy_priority_run();
    const double busy = r.busy_fraction_h();
    out = "busy fraction " + fmt(busy) + " vs arrival rate 0.3 (bound 0.01)";
    return std::abs(busy - 0.3) < 0.01;
}

bool criterion5(std::string& out) {
    const SimResult r = heavy_priority_run();
    const ArrivalSpec heavy = pareto_mean(2.5, 0.3);
    const RenewalTables t = renewal_tables(positive_part(heavy, 1000000));
    const double scale = std::get<DiscretePareto>(heavy.family).scale;

    const double measured = static_cast<double>(r.measured);
    std::int64_t levels = 0;
    for (std::int64_t b = 0;; ++b) {
        if (b + 1 > r.hist_h.direct_cap()) break; // stay in the exact range
        const std::uint64_t cnt = r.hist_h.count_ge(b + 1);
        if (cnt < 200) break;
        // MC error at depth b is driven by independent burst excursions, not
        // occupation slots (one burst of size M > b holds the level for about
        // 2b/0.7 slots on average), so the 0.9 slack is only calibrated where
        // the expected excursion count is also large
        const double excursions =
            measured * scale * std::pow(1.0 + static_cast<double>(b), -2.5);
        if (excursions < 200.0) break;
        const double lhs = static_cast<double>(cnt) / measured;
        const double rhs = 0.9 * 0.3 * t.residual_ccdf(b);
        if (lhs < rhs) {
            out = "P{q_H>" + std::to_string(b) + "} = " + fmt(lhs)
                  + " fell below 0.9 * 0.3 * P{H_R>b} = " + fmt(rhs);
            return false;
        }
        ++levels;
    }
    out = "lower bound held on levels b = 0.." + std::to_string(levels - 1)
          + ", each with >= 200 occupation samples and >= 200 expected bursts";
    return levels >= 10;
}

// ---------------------------------------------------------------- criterion 6

ExperimentConfig tail_workload(Policy pol, std::uint64_t seed, double lambda_l) {
    ExperimentConfig cfg;
    cfg.light = ArrivalSpec{Poisson{lambda_l}};
    cfg.heavy = pareto_mean(2.5, 0.25);
    cfg.policy = pol;
    cfg.slots = 12500000;
    cfg.replications = 8; // 1e8 aggregate
    cfg.seed = seed;
    return cfg;
}

double ccdf_at(const CcdfHistogram& h, std::uint64_t measured, std::int64_t b) {
    return static_cast<double>(h.count_ge(b)) / static_cast<double>(measured);
}

bool criterion6(std::string& out) {
    const std::pair<const char*, Policy> pols[] = {
        {"priority_h", Policy{PolicyKind::PriorityH}},
        {"priority_l", Policy{PolicyKind::PriorityL}},
        {"max_weight", mw(1, 1)},
        {"log_max_weight", Policy{PolicyKind::LogMaxWeight}},
    };
    // The slope is fitted over b in [8, 160] for every policy: at 1e8 slots
    // a level b is visited by about 1e8 * 0.186 * b^-2.5 distinct bursts, so
    // 160 is the deepest level with >= 50 of them. Beyond that the occupation
    // counts ride on a handful of excursions and the LS slope turns into a
    // lottery, in both directions, regardless of how full the buckets look.
    const std::int64_t b_lo = 8, b_hi = 160;
    bool ok = true;
    std::string rows;
    for (std::size_t i = 0; i < 4; ++i) {
        const ExperimentConfig cfg = tail_workload(pols[i].second, 100 + i, 0.1);
        const SimResult merged = run_replications(cfg, ExecMode::Parallel);
        std::string cell;
        try {
            const TailFit fit = fit_tail_index(merged.hist_h.fit_grid(),
                                               ccdf_at(merged.hist_h, merged.measured, b_lo),
                                               ccdf_at(merged.hist_h, merged.measured, b_hi));
            const bool in_band = std::abs(fit.index - 1.5) <= 0.35;
            ok = ok && in_band;
            cell = fmt(fit.index);
        } catch (const EstimatorError& e) {
            ok = false;
            cell = std::string("unfit(") + e.what() + ")";
        }
        rows += std::string(i ? ", " : "") + pols[i].first + "=" + cell;
    }
    out = "q_H tail index over b in [8, 160] vs 1.5 +- 0.35: " + rows;
    return ok;
}

// ---------------------------------------------------------------- criterion 7

bool criterion7(std::string& out) {
    const double ratios[] = {0.5, 1.0, 2.0};
    const double predicted[] = {1.5, 1.5, 3.0};
    const double band[] = {0.35, 0.35, 0.6};
    // Fit ranges follow the burst support as in criterion 6, pushed through
    // the ratio's burst -> q_L map at lambda_L = 0.3: a burst M lifts q_L to
    // about 0.4M (ratio 0.5, starved until sqrt(q_L) crosses q_H), 0.29M
    // (ratio 1) or sqrt(M) (ratio 2, pinned at the weight balance point, so
    // its support ends near sqrt(max M)).  At 1e9 aggregate slots, 50 bursts
    // survive to M = 425, capping the usable depth at 170 / 121 / 20.
    const std::int64_t windows[3][2] = {{10, 160}, {8, 120}, {5, 20}};
    double measured[3] = {0, 0, 0};
    bool ok = true;
    std::string rows;
    for (int i = 0; i < 3; ++i) {
        ExperimentConfig cfg =
            tail_workload(mw(1.0, ratios[i]), 200 + static_cast<std::uint64_t>(i), 0.3);
        cfg.slots = 125000000; // 1e9 aggregate: the fit windows above need it
        const SimResult merged = run_replications(cfg, ExecMode::Parallel);
        std::string cell;
        try {
            const TailFit fit =
                fit_tail_index(merged.hist_l.fit_grid(),
                               ccdf_at(merged.hist_l, merged.measured, windows[i][0]),
                               ccdf_at(merged.hist_l, merged.measured, windows[i][1]));
            measured[i] = fit.index;
            ok = ok && std::abs(fit.index - predicted[i]) <= band[i];
            cell = fmt(fit.index);
        } catch (const EstimatorError& e) {
            ok = false;
            cell = std::string("unfit(") + e.what() + ")";
        }
        rows += (i ? ", " : "") + std::string("ratio ") + fmt(ratios[i]) + " -> "
                + cell + " (want " + fmt(predicted[i]) + " +- " + fmt(band[i]) + ")";
    }
    // the piecewise shape: flat through ratio 1, then climbing with the ratio
    // (0.5 matches the band widths: in-band rows always separate by at least
    // 3.0 - 0.6 - (1.5 + 0.35) = 0.55)
    const bool shape = measured[2] > measured[1] + 0.5
                       && std::abs(measured[0] - measured[1]) < 0.5;
    ok = ok && shape;
    out = "q_L tail index table: " + rows + (shape ? "; kink visible" : "; kink NOT visible");
    return ok;
}

// ---------------------------------------------------------------- criterion 8

bool criterion8(std::string& out) {
    bool ok = true;
    std::string rows;

    struct Point {
        double lambda_l;
        double want_rate;
        double rel_tol;
        bool need_r2;
        double b_lo, b_hi;
    };
    // At lambda_L = 0.5 the intrinsic mode rules and the curve is a clean
    // exponential from b = 5 to the sample floor.  At lambda_L = 0.1 the
    // starvation mode (a burst M > e^b hogs the server while q_L climbs)
    // only dominates the intrinsic mode from b = 3 on, and above b = 6
    // fewer than ~5 bursts clear e^b at this budget, so the occupation
    // there is a single-burst lottery: fit the window in between.
    const Point pts[] = {{0.5, 1.2564312086261697, 0.20, true, 5.0, 0.0},
                         {0.1, 1.5, 0.25, false, 3.0, 6.0}};
    for (int i = 0; i < 2; ++i) {
        const ExperimentConfig cfg = tail_workload(Policy{PolicyKind::LogMaxWeight},
                                                   300 + static_cast<std::uint64_t>(i),
                                                   pts[i].lambda_l);
        const SimResult merged = run_replications(cfg, ExecMode::Parallel);
        std::string cell;
        try {
            const LdFit fit =
                fit_ld_exponent(merged.hist_l.fit_grid(), pts[i].b_lo, pts[i].b_hi);
            const bool rate_ok =
                std::abs(fit.rate - pts[i].want_rate) <= pts[i].rel_tol * pts[i].want_rate;
            const bool r2_ok = !pts[i].need_r2 || fit.r2 >= 0.98;
            ok = ok && rate_ok && r2_ok;
            cell = "rate " + fmt(fit.rate) + " (want " + fmt(pts[i].want_rate) + " +- "
                   + fmt(100 * pts[i].rel_tol) + "%), r2 " + fmt(fit.r2) + " over b in ["
                   + fmt(fit.b_lo) + ", " + fmt(fit.b_hi) + "]";
        } catch (const EstimatorError& e) {
            ok = false;
            cell = std::string("unfit(") + e.what() + ")";
        }
        rows += (i ? "; " : "") + std::string("lambda_L ") + fmt(pts[i].lambda_l) + ": " + cell;
    }
    out = "log-max-weight q_L decay: " + rows;
    return ok;
}

// ---------------------------------------------------------------- criterion 9

bool criterion9(std::string& out) {
    struct Case {
        const char* name;
        ArrivalSpec light;
        ArrivalSpec heavy;
        std::int64_t cap;
    };
    const Case cases[] = {
        {"A", ArrivalSpec{Bernoulli{0.3}},
         ArrivalSpec{TabulatedPmf{{0, 3}, {0.9, 0.1}}}, 60},
        {"B", ArrivalSpec{Bernoulli{0.2}},
         ArrivalSpec{TabulatedPmf{{0, 2, 5}, {0.8, 0.15, 0.05}}}, 80},
        {"C", ArrivalSpec{Bernoulli{0.25}},
         ArrivalSpec{TabulatedPmf{{0, 8}, {0.95, 0.05}}}, 120},
    };
    const Policy pols[] = {Policy{PolicyKind::PriorityH}, Policy{PolicyKind::PriorityL},
                           mw(1, 1), Policy{PolicyKind::LogMaxWeight}};

    double worst_tv = 0.0;
    std::string worst_at;
    std::uint64_t seed = 7;
    for (const Case& c : cases) {
        for (const Policy& pol : pols) {
            const StationaryResult orc =
                stationary_distribution(c.light, c.heavy, pol, c.cap);
            if (!orc.usable) {
                out = std::string("oracle unusable for case ") + c.name + " under "
                      + policy_name(pol);
                return false;
            }
            SimConfig sc;
            sc.light = c.light;
            sc.heavy = c.heavy;
            sc.policy = pol;
            sc.slots = 10000000;
            sc.burn_in = 100000;
            sc.seed = seed++;
            sc.direct_cap = c.cap;
            const SimResult r = simulate(sc);

            const double n = static_cast<double>(r.measured);
            auto tv_against = [&](const CcdfHistogram& h,
                                  const std::vector<double>& marginal) {
                double tv = 0.0;
                const auto& direct = h.direct_counts();
                for (std::int64_t v = 0; v < c.cap; ++v)
                    tv += std::abs(static_cast<double>(direct[static_cast<std::size_t>(v)]) / n
                                   - marginal[static_cast<std::size_t>(v)]);
                // fold everything at or above the cap into the cap point
                tv += std::abs(static_cast<double>(h.count_ge(c.cap)) / n
                               - marginal[static_cast<std::size_t>(c.cap)]);
                return 0.5 * tv;
            };
            const double tv_h = tv_against(r.hist_h, orc.marginal_h);
            const double tv_l = tv_against(r.hist_l, orc.marginal_l);
            const double tv = std::max(tv_h, tv_l);
            if (tv > worst_tv) {
                worst_tv = tv;
                worst_at = std::string(c.name) + "/" + policy_name(pol);
            }
        }
    }
    out = "worst marginal TV " + fmt(worst_tv) + " at " + worst_at
          + " over 3 configs x 4 policies (bound 0.01)";
    return worst_tv < 0.01;
}

// --------------------------------------------------------------- criterion 10

std::vector<CcdfPoint> exact_power_grid(double index, double total, double b_top) {
    std::vector<CcdfPoint> pts;
    for (double b = 1.0; b <= b_top; b *= 1.2) {
        CcdfPoint p;
        p.b = b;
        p.ccdf = std::pow(b, -index);
        p.count_ge = total * p.ccdf;
        p.mass = p.count_ge - total * std::pow(b * 1.2, -index);
        pts.push_back(p);
    }
    return pts;
}

ExperimentConfig fuzz_config(RngStream& rng) {
    ExperimentConfig c;
    auto u = [&] { return rng.next_unit(); };
    switch (rng.next_u64() % 3) {
    case 0: c.light = ArrivalSpec{Bernoulli{u()}}; break;
    case 1: c.light = ArrivalSpec{Poisson{u() * 2}}; break;
    default: c.light = ArrivalSpec{GeometricBatch{u() * 3}}; break;
    }
    switch (rng.next_u64() % 4) {
    case 0: c.heavy = ArrivalSpec{DiscretePareto{1.0 + 3 * u(), u()}}; break;
    case 1: c.heavy = ArrivalSpec{Zeta{1.0 + 2 * u()}}; break;
    case 2: {
        TabulatedPmf t;
        const int k = 1 + static_cast<int>(rng.next_u64() % 4);
        double tot = 0.0;
        for (int i = 0; i < k; ++i) {
            t.values.push_back(static_cast<std::int64_t>(rng.next_u64() % 32));
            const double w = u() + 0.01;
            t.probs.push_back(w);
            tot += w;
        }
        for (double& w : t.probs) w /= tot;
        c.heavy = ArrivalSpec{std::move(t)};
        break;
    }
    default: {
        SlowVaryModulated sv;
        sv.sv_power = u() * 2;
        sv.n_max = std::int64_t{1} << (10 + rng.next_u64() % 6);
        sv.base = std::make_shared<const ArrivalSpec>(
            rng.next_u64() % 2 ? ArrivalSpec{Zeta{1.0 + u()}}
                               : ArrivalSpec{DiscretePareto{1.0 + u(), u()}});
        c.heavy = ArrivalSpec{std::move(sv)};
        break;
    }
    }
    const PolicyKind kinds[] = {PolicyKind::PriorityH, PolicyKind::PriorityL,
                                PolicyKind::MaxWeightAlpha, PolicyKind::LogMaxWeight};
    c.policy.kind = kinds[rng.next_u64() % 4];
    c.policy.alpha_h = u() * 3 + 0.1;
    c.policy.alpha_l = u() * 3 + 0.1;
    c.slots = 1 + rng.next_u64() % 10000000;
    c.burn_in = rng.next_u64() % 2 ? kBurnInAuto : rng.next_u64() % 1000;
    c.seed = rng.next_u64();
    c.replications = 1 + static_cast<std::uint32_t>(rng.next_u64() % 64);
    c.direct_cap = 1 + static_cast<std::int64_t>(rng.next_u64() % 10000);
    c.estimator.tail_q_hi = u();
    c.estimator.tail_q_lo = u() * 1e-4;
    c.estimator.ld_b_lo = u() * 10;
    c.estimator.ld_b_hi = rng.next_u64() % 2 ? 0.0 : 50 + u() * 100;
    if (rng.next_u64() % 2)
        c.out_dir = "out_" + std::to_string(rng.next_u64() % 1000);
    return c;
}

bool criterion10(std::string& out) {
    std::ostringstream notes;
    bool ok = true;

    // max-weight decisions invariant under common alpha scaling
    {
        RngStream rng(2024, 0);
        std::uint64_t changes = 0, states = 0;
        const std::pair<double, double> bases[] = {{1.0, 1.0}, {1.3, 0.7}};
        for (const auto& [ah, al] : bases) {
            for (int i = 0; i < 10000; ++i) {
                const auto qh = static_cast<std::int64_t>(rng.next_u64() % 1000000);
                const auto ql = static_cast<std::int64_t>(rng.next_u64() % 1000000);
                const Action base = decide(mw(ah, al), qh, ql);
                for (double beta : {1e-6, 1.0, 1e6}) {
                    ++states;
                    changes += decide(mw(beta * ah, beta * al), qh, ql) != base;
                }
            }
        }
        ok = ok && changes == 0;
        notes << "scaling changes " << changes << "/" << states;
    }

    // histogram merging is order-free
    {
        const ArrivalSpec law{DiscretePareto{1.5, 0.9}};
        RngStream rng(9, 9);
        CcdfHistogram parts[3] = {CcdfHistogram(256), CcdfHistogram(256),
                                  CcdfHistogram(256)};
        for (int i = 0; i < 60000; ++i) parts[i % 3].add(sample(law, rng));
        CcdfHistogram ab = parts[0];
        ab.merge(parts[1]);
        ab.merge(parts[2]);
        CcdfHistogram cb = parts[2];
        cb.merge(parts[0]);
        cb.merge(parts[1]);
        bool same = ab.total() == cb.total();
        auto pa = ab.curve(), pb = cb.curve();
        same = same && pa.size() == pb.size();
        for (std::size_t i = 0; same && i < pa.size(); ++i)
            same = pa[i].b == pb[i].b && pa[i].count_ge == pb[i].count_ge;
        ok = ok && same;
        notes << "; merge order-free " << (same ? "yes" : "NO");
    }

    // config round-trip, crafted plus fuzzed
    {
        std::vector<ExperimentConfig> cases;
        cases.emplace_back();
        {
            ExperimentConfig b;
            b.light = ArrivalSpec{Bernoulli{0.3}};
            b.heavy = ArrivalSpec{TabulatedPmf{{0, 3, 7}, {0.8, 0.15, 0.05}}};
            b.policy = mw(2, 3);
            b.slots = 123456;
            b.burn_in = 0;
            b.seed = 99;
            b.replications = 4;
            b.direct_cap = 512;
            b.estimator = EstimatorSettings{0.05, 1e-6, 3.0, 40.0};
            b.out_dir = "results/run1";
            cases.push_back(std::move(b));
        }
        {
            ExperimentConfig c;
            c.light = ArrivalSpec{GeometricBatch{0.4}};
            SlowVaryModulated sv;
            sv.base = std::make_shared<const ArrivalSpec>(ArrivalSpec{Zeta{1.8}});
            sv.sv_power = 2.0;
            sv.n_max = 1 << 16;
            c.heavy = ArrivalSpec{std::move(sv)};
            c.policy.kind = PolicyKind::LogMaxWeight;
            c.burn_in = 12345;
            cases.push_back(std::move(c));
        }
        RngStream rng(77, 1);
        for (int i = 0; i < 20; ++i) cases.push_back(fuzz_config(rng));

        int failures = 0;
        for (const auto& c : cases)
            if (parse_config(serialize_config(c)) != c) ++failures;
        ok = ok && failures == 0;
        notes << "; round-trip failures " << failures << "/" << cases.size();
    }

    // estimators on exact tables
    {
        const TailFit f15 = fit_tail_index(exact_power_grid(1.5, 1e9, 1e5), 1e-2, 1e-5);
        const TailFit f30 = fit_tail_index(exact_power_grid(3.0, 1e12, 1e5), 1e-2, 1e-5);
        const double worst_idx =
            std::max(std::abs(f15.index - 1.5), std::abs(f30.index - 3.0));

        std::vector<CcdfPoint> geo;
        for (std::int64_t b = 1; b <= 40; ++b) {
            CcdfPoint p;
            p.b = static_cast<double>(b);
            p.ccdf = std::pow(2.0, -static_cast<double>(b));
            p.count_ge = 1e15 * p.ccdf;
            geo.push_back(p);
        }
        const LdFit lf = fit_ld_exponent(geo, 5.0);
        const double rate_gap = std::abs(lf.rate - std::log(2.0));

        ok = ok && worst_idx <= 1e-3 && rate_gap <= 1e-6;
        notes << "; index gap " << fmt(worst_idx) << " (bound 1e-3), rate gap "
              << fmt(rate_gap) << " (bound 1e-6)";
    }

    out = notes.str();
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: hqsim_acceptance <criterion 1..10>\n";
        return 2;
    }
    const int n = std::atoi(argv[1]);
    bool pass = false;
    std::string detail;
    try {
        switch (n) {
        case 1: pass = criterion1(detail); break;
        case 2: pass = criterion2(detail); break;
        case 3: pass = criterion3(detail); break;
        case 4: pass = criterion4(detail); break;
        case 5: pass = criterion5(detail); break;
        case 6: pass = criterion6(detail); break;
        case 7: pass = criterion7(detail); break;
        case 8: pass = criterion8(detail); break;
        case 9: pass = criterion9(detail); break;
        case 10: pass = criterion10(detail); break;
        default:
            std::cerr << "usage: hqsim_acceptance <criterion 1..10>\n";
            return 2;
        }
    } catch (const std::exception& e) {
        std::cout << "FAIL criterion " << n << ": unexpected exception: " << e.what()
                  << "\n";
        return 1;
    }
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << n << ": " << detail
              << "\n";
    return pass ? 0 : 1;
}
