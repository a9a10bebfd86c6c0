#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "hqsim/arrival.hpp"
#include "hqsim/oracle.hpp"
#include "hqsim/renewal.hpp"

using namespace hqsim;

namespace {

ArrivalSpec tabulated(std::vector<std::int64_t> v, std::vector<double> p) {
    return ArrivalSpec{TabulatedPmf{std::move(v), std::move(p)}};
}

} // namespace

TEST_CASE("stationary law with no heavy traffic is the light arrival law") {
    // L arrives Bernoulli(1/2) and is served immediately: post-arrival q_l
    // is exactly the fresh arrival, so busy_l = 1/2
    auto r = stationary_distribution(ArrivalSpec{Bernoulli{0.5}},
                                     tabulated({0}, {1.0}),
                                     Policy{PolicyKind::PriorityL}, 4);
    CHECK(r.usable);
    CHECK(r.folded_mass == 0.0);
    CHECK(r.busy_l == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.busy_h == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.marginal_l[1] == doctest::Approx(0.5).epsilon(1e-9));

    double mass = 0.0;
    for (double x : r.pi) mass += x;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("stationary busy fraction equals the arrival rate (flow balance)") {
    // heavy-only system: bursts of 2 at rate 0.3, so lambda_H = 0.6 and the
    // post-arrival busy fraction must equal it
    auto r = stationary_distribution(tabulated({0}, {1.0}),
                                     tabulated({0, 2}, {0.7, 0.3}),
                                     Policy{PolicyKind::PriorityH}, 50);
    CHECK(r.usable);
    CHECK(r.busy_h == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(r.busy_l == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("a cap that folds visible mass is reported unusable") {
    auto r = stationary_distribution(tabulated({0}, {1.0}),
                                     tabulated({0, 2}, {0.7, 0.3}),
                                     Policy{PolicyKind::PriorityH}, 3);
    CHECK(!r.usable);
    CHECK(r.folded_mass > 1e-6);
}

TEST_CASE("stationary solver rejects unbounded arrival laws") {
    CHECK_THROWS_AS(stationary_distribution(ArrivalSpec{Poisson{0.3}},
                                            tabulated({0}, {1.0}),
                                            Policy{PolicyKind::PriorityH}, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(stationary_distribution(ArrivalSpec{Bernoulli{0.3}},
                                            ArrivalSpec{DiscretePareto{2.5, 0.2}},
                                            Policy{PolicyKind::PriorityH}, 10),
                    std::invalid_argument);
}

TEST_CASE("renewal walk reproduces the stationary residual and age laws") {
    // intervals uniform on {1,2}: E = 3/2, P{R=1} = 2/3, P{R=2} = 1/3
    Pmf plus;
    plus.p = {0.0, 0.5, 0.5};
    auto e = renewal_enumeration(plus, 100000);
    CHECK(e.residual[1] == doctest::Approx(2.0 / 3).epsilon(1e-4));
    CHECK(e.residual[2] == doctest::Approx(1.0 / 3).epsilon(1e-4));
    CHECK(e.age[0] == doctest::Approx(2.0 / 3).epsilon(1e-4));
    CHECK(e.age[1] == doctest::Approx(1.0 / 3).epsilon(1e-4));
    CHECK(e.joint(1, 1) == doctest::Approx(1.0 / 3).epsilon(1e-4));
    CHECK(e.joint(2, 0) == doctest::Approx(1.0 / 3).epsilon(1e-4));
    CHECK(e.joint(2, 1) == 0.0);

    // deterministic intervals of 4: everything uniform on the cycle
    Pmf det;
    det.p = {0.0, 0.0, 0.0, 0.0, 1.0};
    auto d = renewal_enumeration(det, 100000);
    for (int k = 1; k <= 4; ++k)
        CHECK(d.residual[static_cast<std::size_t>(k)] == doctest::Approx(0.25).epsilon(1e-4));
    for (int l = 0; l <= 3; ++l)
        CHECK(d.age[static_cast<std::size_t>(l)] == doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("renewal walk agrees with the closed-form tables") {
    Pmf plus;
    plus.p = {0.0, 1.0 / 3, 1.0 / 3, 1.0 / 3};
    auto tables = renewal_tables(plus);
    auto e = renewal_enumeration(plus, 200000);
    for (int k = 1; k <= 3; ++k)
        CHECK(e.residual[static_cast<std::size_t>(k)]
              == doctest::Approx(tables.residual[static_cast<std::size_t>(k)]).epsilon(1e-4));
    for (int l = 0; l <= 2; ++l)
        CHECK(e.age[static_cast<std::size_t>(l)]
              == doctest::Approx(tables.age[static_cast<std::size_t>(l)]).epsilon(1e-4));
    for (int k = 1; k <= 3; ++k)
        for (int l = 0; l + k <= 3; ++l)
            CHECK(e.joint(k, l) == doctest::Approx(tables.joint(k, l)).epsilon(1e-4));
}

TEST_CASE("renewal walk rejects malformed interval laws") {
    Pmf at_zero;
    at_zero.p = {0.5, 0.5};
    CHECK_THROWS_AS(renewal_enumeration(at_zero, 1000), std::invalid_argument);
    Pmf ok;
    ok.p = {0.0, 1.0};
    CHECK_THROWS_AS(renewal_enumeration(ok, 1), std::invalid_argument);
}

TEST_CASE("a random sum of light increments inherits the count's tail") {
    // N has tail index 1.5, increments are Poisson(2): P{S_N > b} should
    // track P{N > b / E[X]} within a constant factor
    const ArrivalSpec count_law{DiscretePareto{1.5, 0.9}};
    const ArrivalSpec inc_law{Poisson{2.0}};
    auto t = random_sum_trend(count_law, inc_law, {50, 100, 200}, 200000, 17);
    CHECK(t.replicates == 200000);
    for (std::size_t i = 0; i < t.b.size(); ++i) {
        CHECK(t.p_sum[i] > 0.0);
        CHECK(t.p_count[i] > 0.0);
        CHECK(t.ratio[i] > 0.6);
        CHECK(t.ratio[i] < 1.6);
    }

    auto serial = random_sum_trend(count_law, inc_law, {50, 100, 200}, 200000, 17,
                                   /*parallel=*/false);
    for (std::size_t i = 0; i < t.b.size(); ++i) {
        CHECK(serial.p_sum[i] == t.p_sum[i]); // integer counts: bit-identical
        CHECK(serial.p_count[i] == t.p_count[i]);
    }
}
