#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bns/errors.hpp"
#include "bns/model.hpp"
#include "bns/rng.hpp"
#include "bns/varswap.hpp"
#include "oracles.hpp"

using namespace bns;

namespace {

ModelParams swap_params() {
    ModelParams p;
    p.s0 = 100.0;
    p.sigma0_sq = 0.04;
    p.rho = -1.5;
    p.lambda = 2.0;
    p.theta = 0.4;
    p.r = 0.03;
    p.horizon = 0.5;
    return p;
}

const SubordinatorSpec kZ{1.0, 10.0};
const SubordinatorSpec kZb{2.0, 8.0};

// Independent restatement of the conditional expectation, written directly from
// the closed form with scalar arithmetic only.
double expected_rv_reference(const ModelParams& p, const SubordinatorSpec& z,
                             const SubordinatorSpec& zb, double t, double sig_sq, double v) {
    const double tau = p.horizon - t;
    const double eps = (1.0 - std::exp(-p.lambda * tau)) / p.lambda;
    const double k1_mixed = (z.a / z.mu) * (1.0 - p.theta) + (zb.a / zb.mu) * p.theta;
    const double integ = (v + eps * sig_sq + k1_mixed * (tau - eps)) / p.horizon;
    const double w_z = p.rho * (1.0 - p.theta);
    const double w_zb = p.rho * p.theta;
    const double pen = w_z * w_z * p.lambda * (2.0 * z.a / (z.mu * z.mu)) +
                       w_zb * w_zb * p.lambda * (2.0 * zb.a / (zb.mu * zb.mu));
    return integ + pen;
}

}  // namespace

TEST_CASE("contract validation") {
    VarSwapContract ok{0.04, 1.0};
    CHECK_NOTHROW(ok.validate());
    VarSwapContract zero_strike{0.0, 2.5};
    CHECK_NOTHROW(zero_strike.validate());

    VarSwapContract bad_strike{-0.01, 1.0};
    CHECK_THROWS_AS(bad_strike.validate(), ValidationError);
    VarSwapContract zero_notional{0.04, 0.0};
    CHECK_THROWS_AS(zero_notional.validate(), ValidationError);
    VarSwapContract negative_notional{0.04, -3.0};
    CHECK_THROWS_AS(negative_notional.validate(), ValidationError);
    VarSwapContract nan_strike{std::nan(""), 1.0};
    CHECK_THROWS_AS(nan_strike.validate(), ValidationError);
}

TEST_CASE("payoff arithmetic") {
    VarSwapContract unit{0.04, 1.0};
    CHECK(payoff(unit, 0.04) == 0.0);
    CHECK(payoff(unit, 0.09) == doctest::Approx(0.05).epsilon(1e-14));

    VarSwapContract big{0.04, 100.0};
    CHECK(payoff(big, 0.01) == doctest::Approx(-3.0).epsilon(1e-14));

    // linear in notional and in -strike
    VarSwapContract seven{0.04, 7.0};
    CHECK(payoff(seven, 0.09) == doctest::Approx(7.0 * payoff(unit, 0.09)).epsilon(1e-14));
    VarSwapContract tighter{0.02, 1.0};
    CHECK(payoff(tighter, 0.09) - payoff(unit, 0.09) == doctest::Approx(0.02).epsilon(1e-12));

    VarSwapContract invalid{-1.0, 1.0};
    CHECK_THROWS_AS(payoff(invalid, 0.04), ValidationError);
}

TEST_CASE("conditional expected realized variance") {
    ModelParams p = swap_params();

    SUBCASE("matches the scalar restatement at several states") {
        struct State {
            double t, sig, v;
        };
        const std::vector<State> states = {
            {0.0, 0.04, 0.0}, {0.1, 0.07, 0.005}, {0.3, 0.02, 0.011}, {0.5, 0.05, 0.023}};
        for (const auto& st : states) {
            CAPTURE(st.t);
            double got = conditional_expected_rv(p, kZ, kZb, st.t, st.sig, st.v);
            double want = expected_rv_reference(p, kZ, kZb, st.t, st.sig, st.v);
            CHECK(got == doctest::Approx(want).epsilon(1e-13));
        }
    }

    SUBCASE("at expiry only the accumulated variance and the jump penalty remain") {
        double got = conditional_expected_rv(p, kZ, kZb, p.horizon, 0.08, 0.021);
        const double w_z = p.rho * (1.0 - p.theta);
        const double w_zb = p.rho * p.theta;
        double pen = w_z * w_z * p.lambda * cumulants(kZ).k2 +
                     w_zb * w_zb * p.lambda * cumulants(kZb).k2;
        CHECK(got == doctest::Approx(0.021 / p.horizon + pen).epsilon(1e-13));
    }

    SUBCASE("no jumps: exponential decay integral in closed form") {
        ModelParams q = swap_params();
        q.theta = 0.5;
        SubordinatorSpec null_z{0.0, 10.0}, null_zb{0.0, 8.0};
        double got = conditional_expected_rv(q, null_z, null_zb, 0.0, q.sigma0_sq, 0.0);
        double want =
            q.sigma0_sq * (1.0 - std::exp(-q.lambda * q.horizon)) / (q.lambda * q.horizon);
        CHECK(got == doctest::Approx(want).epsilon(1e-14));
    }

    SUBCASE("rejects states outside the contract window") {
        CHECK_THROWS_AS(conditional_expected_rv(p, kZ, kZb, p.horizon + 0.01, 0.04, 0.0),
                        DomainError);
        CHECK_THROWS_AS(conditional_expected_rv(p, kZ, kZb, -0.01, 0.04, 0.0), DomainError);
        CHECK_THROWS_AS(conditional_expected_rv(p, kZ, kZb, 0.1, -0.04, 0.0), ValidationError);
        CHECK_THROWS_AS(conditional_expected_rv(p, kZ, kZb, 0.1, 0.04, -0.001), ValidationError);
    }

    SUBCASE("Monte Carlo mean of per-path realized variance agrees from time zero") {
        ModelParams q = swap_params();
        const std::size_t n = 20000, steps = 64;
        std::vector<double> rv(n);
        for (std::size_t k = 0; k < n; ++k) {
            Path path = simulate_path(q, kZ, kZb, steps, path_stream_seeds(4242, k));
            rv[k] = realized_variance(path, q, kZ, kZb);
        }
        auto ms = oracle::mean_se(rv);
        double want = conditional_expected_rv(q, kZ, kZb, 0.0, q.sigma0_sq, 0.0);
        CHECK(std::fabs(ms.mean - want) < 4.0 * ms.se);
    }

    SUBCASE("Monte Carlo mean from a mid-contract state agrees") {
        ModelParams q = swap_params();
        q.theta = 0.3;
        q.rho = -1.0;
        ModelState state;
        state.t = 0.2;
        state.x = -0.04;
        state.sigma_sq = 0.05;
        state.v = 0.008;
        const std::size_t n = 20000, steps = 48;
        std::vector<double> rv(n);
        for (std::size_t k = 0; k < n; ++k) {
            Path path = simulate_path_from(q, kZ, kZb, state, steps, path_stream_seeds(555, k));
            rv[k] = realized_variance(path, q, kZ, kZb);
        }
        auto ms = oracle::mean_se(rv);
        double want = conditional_expected_rv(q, kZ, kZb, state.t, state.sigma_sq, state.v);
        CHECK(std::fabs(ms.mean - want) < 4.0 * ms.se);
    }
}

TEST_CASE("swap price") {
    ModelParams p = swap_params();

    SUBCASE("discounted expectation against strike") {
        VarSwapContract c{0.05, 3.0};
        double expected = conditional_expected_rv(p, kZ, kZb, 0.1, 0.06, 0.004);
        double got = price(p, kZ, kZb, c, 0.1, 0.06, 0.004);
        double want = std::exp(-p.r * (p.horizon - 0.1)) * (expected - c.strike) * c.notional;
        CHECK(got == doctest::Approx(want).epsilon(1e-14));
    }

    SUBCASE("zero exactly when struck at the current conditional expectation") {
        double at_the_money = conditional_expected_rv(p, kZ, kZb, p.horizon, 0.08, 0.025);
        VarSwapContract c{at_the_money, 5.0};
        CHECK(price(p, kZ, kZb, c, p.horizon, 0.08, 0.025) == 0.0);
    }

    SUBCASE("no jumps, zero rate, zero strike reduces to the decay integral") {
        ModelParams q = swap_params();
        q.r = 0.0;
        SubordinatorSpec null_z{0.0, 10.0}, null_zb{0.0, 8.0};
        VarSwapContract c{0.0, 1.0};
        double got = price(q, null_z, null_zb, c, 0.0, q.sigma0_sq, 0.0);
        double want =
            q.sigma0_sq * (1.0 - std::exp(-q.lambda * q.horizon)) / (q.lambda * q.horizon);
        CHECK(got == doctest::Approx(want).epsilon(1e-14));
    }

    SUBCASE("rate only discounts; the expectation part carries no r") {
        ModelParams with_rate = swap_params();
        with_rate.r = 0.04;
        ModelParams no_rate = swap_params();
        no_rate.r = 0.0;
        VarSwapContract c{0.03, 2.0};
        const double t = 0.15;
        double discounted = price(with_rate, kZ, kZb, c, t, 0.05, 0.006);
        double undiscounted = price(no_rate, kZ, kZb, c, t, 0.05, 0.006);
        double factor = std::exp(-0.04 * (with_rate.horizon - t));
        CHECK(discounted == doctest::Approx(factor * undiscounted).epsilon(1e-14));
    }

    SUBCASE("exactly linear in notional") {
        VarSwapContract one{0.03, 1.0};
        VarSwapContract hundred{0.03, 100.0};
        double p1 = price(p, kZ, kZb, one, 0.1, 0.05, 0.004);
        double p100 = price(p, kZ, kZb, hundred, 0.1, 0.05, 0.004);
        CHECK(p100 == 100.0 * p1);
    }

    SUBCASE("strike enters linearly through the discount factor") {
        VarSwapContract low{0.02, 4.0};
        VarSwapContract high{0.07, 4.0};
        const double t = 0.2;
        double diff = price(p, kZ, kZb, low, t, 0.05, 0.01) - price(p, kZ, kZb, high, t, 0.05, 0.01);
        double want = std::exp(-p.r * (p.horizon - t)) * (0.07 - 0.02) * 4.0;
        CHECK(diff == doctest::Approx(want).epsilon(1e-12));
    }

    SUBCASE("invalid contracts are rejected before any computation") {
        VarSwapContract bad{0.04, -1.0};
        CHECK_THROWS_AS(price(p, kZ, kZb, bad, 0.0, 0.04, 0.0), ValidationError);
    }

    SUBCASE("closed form against a discounted Monte Carlo payoff from a mid state") {
        ModelParams q = swap_params();
        q.theta = 0.6;
        VarSwapContract c{0.05, 10.0};
        ModelState state;
        state.t = 0.25;
        state.x = 0.01;
        state.sigma_sq = 0.045;
        state.v = 0.012;
        const std::size_t n = 20000, steps = 48;
        std::vector<double> pay(n);
        for (std::size_t k = 0; k < n; ++k) {
            Path path = simulate_path_from(q, kZ, kZb, state, steps, path_stream_seeds(808, k));
            pay[k] = payoff(c, realized_variance(path, q, kZ, kZb));
        }
        auto ms = oracle::mean_se(pay);
        const double disc = std::exp(-q.r * (q.horizon - state.t));
        double closed = price(q, kZ, kZb, c, state.t, state.sigma_sq, state.v);
        CHECK(std::fabs(disc * ms.mean - closed) < 4.0 * disc * ms.se);
    }
}

TEST_CASE("closed-form price versus Monte Carlo on random parameter sets") {
    std::mt19937_64 gen(20240815);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 2; ++trial) {
        ModelParams p;
        p.s0 = 50.0 + 100.0 * u01(gen);
        p.sigma0_sq = 0.01 + 0.08 * u01(gen);
        p.rho = -2.0 * u01(gen);
        p.lambda = 0.5 + 2.5 * u01(gen);
        p.theta = u01(gen);
        p.r = 0.05 * u01(gen);
        p.horizon = 0.25 + 0.75 * u01(gen);
        SubordinatorSpec z{0.3 + 2.0 * u01(gen), 2.0 + 10.0 * u01(gen)};
        SubordinatorSpec zb{0.3 + 2.0 * u01(gen), 2.0 + 10.0 * u01(gen)};
        VarSwapContract c{0.02 + 0.04 * u01(gen), 1.0};
        CAPTURE(trial);

        const std::size_t n = 15000, steps = 64;
        std::vector<double> pay(n);
        for (std::size_t k = 0; k < n; ++k) {
            Path path = simulate_path(p, z, zb, steps, path_stream_seeds(9000 + trial, k));
            pay[k] = payoff(c, realized_variance(path, p, z, zb));
        }
        auto ms = oracle::mean_se(pay);
        const double disc = std::exp(-p.r * p.horizon);
        double closed = price(p, z, zb, c, 0.0, p.sigma0_sq, 0.0);
        CHECK(std::fabs(disc * ms.mean - closed) < 4.0 * disc * ms.se);
    }
}

TEST_CASE("fair strike") {
    ModelParams p = swap_params();

    SUBCASE("definition: time-zero price at the fair strike is exactly zero") {
        double k_star = fair_strike(p, kZ, kZb);
        VarSwapContract c{k_star, 12.0};
        CHECK(price(p, kZ, kZb, c, 0.0, p.sigma0_sq, 0.0) == 0.0);
    }

    SUBCASE("no leverage, no jumps: decay integral again") {
        ModelParams q = swap_params();
        q.rho = 0.0;
        SubordinatorSpec null_z{0.0, 10.0}, null_zb{0.0, 8.0};
        double want =
            q.sigma0_sq * (1.0 - std::exp(-q.lambda * q.horizon)) / (q.lambda * q.horizon);
        CHECK(fair_strike(q, null_z, null_zb) == doctest::Approx(want).epsilon(1e-14));
    }

    SUBCASE("raising either mean jump inflow raises the fair strike") {
        ModelParams q = swap_params();
        q.theta = 0.5;  // both drivers active
        double base = fair_strike(q, kZ, kZb);
        double prev = base;
        for (double scale : {1.5, 2.0, 3.0}) {
            SubordinatorSpec bigger_z{kZ.a * scale, kZ.mu};
            double k = fair_strike(q, bigger_z, kZb);
            CHECK(k > prev);
            prev = k;
        }
        prev = base;
        for (double scale : {1.5, 2.0, 3.0}) {
            SubordinatorSpec bigger_zb{kZb.a * scale, kZb.mu};
            double k = fair_strike(q, kZ, bigger_zb);
            CHECK(k > prev);
            prev = k;
        }
        // smaller mu means larger mean jumps, so the strike must rise too
        SubordinatorSpec heavier_z{kZ.a, kZ.mu / 2.0};
        CHECK(fair_strike(q, heavier_z, kZb) > base);
    }
}
