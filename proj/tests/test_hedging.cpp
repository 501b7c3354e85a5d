#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bns/blackscholes.hpp"
#include "bns/errors.hpp"
#include "bns/hedging.hpp"
#include "bns/levy.hpp"
#include "bns/model.hpp"
#include "bns/varswap.hpp"
#include "oracles.hpp"

using namespace bns;

namespace {

ModelParams hedge_world() {
    ModelParams p;
    p.s0 = 100.0;
    p.sigma0_sq = 0.04;
    p.rho = -0.5;
    p.lambda = 2.0;
    p.theta = 0.5;
    p.r = 0.03;
    p.horizon = 0.5;
    return p;
}

const SubordinatorSpec kZ{1.0, 10.0};
const SubordinatorSpec kZb{2.0, 8.0};

StableAssetParams stable_asset() {
    StableAssetParams st;
    st.y0 = 100.0;
    st.sigma = 0.25;
    st.rho_prime = 0.9;
    return st;
}

EuropeanOption atm_call(double expiry) {
    EuropeanOption opt;
    opt.strike = 100.0;
    opt.expiry = expiry;
    opt.kind = OptionKind::Call;
    return opt;
}

// Paired significance of Var(a) vs Var(b) under common random numbers:
// mean and SE of the per-path difference of squared errors.
oracle::MeanSe paired_sq_diff(const HedgingErrorStats& a, const HedgingErrorStats& b) {
    REQUIRE(a.errors.size() == b.errors.size());
    std::vector<double> d(a.errors.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = a.errors[i] * a.errors[i] - b.errors[i] * b.errors[i];
    return oracle::mean_se(d);
}

}  // namespace

TEST_CASE("option payoff and validation") {
    EuropeanOption call = atm_call(1.0);
    CHECK(option_payoff(call, 130.0) == 30.0);
    CHECK(option_payoff(call, 70.0) == 0.0);
    CHECK(option_payoff(call, 100.0) == 0.0);

    EuropeanOption put = call;
    put.kind = OptionKind::Put;
    CHECK(option_payoff(put, 70.0) == 30.0);
    CHECK(option_payoff(put, 130.0) == 0.0);

    EuropeanOption bad = call;
    bad.strike = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad.strike = 100.0;
    bad.expiry = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("Black-Scholes price and delta") {
    SUBCASE("deep in-the-money call delta approaches one") {
        EuropeanOption opt;
        opt.strike = 1.0;
        opt.expiry = 1.0;
        PriceDelta pd = bs_price_delta(100.0, opt, 0.02, 0.05, 0.0);
        CHECK(std::fabs(pd.delta - 1.0) < 1e-6);
    }

    SUBCASE("call price respects the arbitrage bounds") {
        EuropeanOption opt = atm_call(1.0);
        for (double y : {40.0, 80.0, 100.0, 120.0, 250.0}) {
            CAPTURE(y);
            PriceDelta pd = bs_price_delta(y, opt, 0.03, 0.2, 0.25);
            double intrinsic = y - opt.strike * std::exp(-0.03 * 0.75);
            CHECK(pd.price >= std::max(intrinsic, 0.0));
            CHECK(pd.price <= y);
        }
    }

    SUBCASE("finite difference of the price reproduces the delta") {
        for (OptionKind kind : {OptionKind::Call, OptionKind::Put}) {
            EuropeanOption opt = atm_call(1.0);
            opt.kind = kind;
            for (double y : {70.0, 95.0, 100.0, 110.0, 160.0}) {
                CAPTURE(y);
                PriceDelta pd = bs_price_delta(y, opt, 0.03, 0.22, 0.3);
                double h = 1e-4 * y;
                double fd = (bs_price_delta(y + h, opt, 0.03, 0.22, 0.3).price -
                             bs_price_delta(y - h, opt, 0.03, 0.22, 0.3).price) /
                            (2.0 * h);
                CHECK(pd.delta == doctest::Approx(fd).epsilon(1e-6));
            }
        }
    }

    SUBCASE("put-call parity") {
        EuropeanOption call = atm_call(1.0);
        EuropeanOption put = call;
        put.kind = OptionKind::Put;
        for (double y : {80.0, 100.0, 125.0}) {
            double c = bs_price_delta(y, call, 0.04, 0.3, 0.2).price;
            double p = bs_price_delta(y, put, 0.04, 0.3, 0.2).price;
            double forward = y - call.strike * std::exp(-0.04 * 0.8);
            CHECK(c - p == doctest::Approx(forward).epsilon(1e-12));
        }
    }

    SUBCASE("evaluation at or past expiry is rejected") {
        EuropeanOption opt = atm_call(1.0);
        CHECK_THROWS_AS(bs_price_delta(100.0, opt, 0.0, 0.2, 1.0), DomainError);
        CHECK_THROWS_AS(bs_price_delta(100.0, opt, 0.0, 0.2, 1.5), DomainError);
    }
}

TEST_CASE("stable asset validation") {
    StableAssetParams ok = stable_asset();
    CHECK_NOTHROW(ok.validate());
    ok.rho_prime = 1.0;
    CHECK_NOTHROW(ok.validate());
    ok.rho_prime = -1.0;
    CHECK_NOTHROW(ok.validate());

    StableAssetParams bad = stable_asset();
    bad.y0 = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = stable_asset();
    bad.sigma = -0.1;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = stable_asset();
    bad.rho_prime = 1.01;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("closed-form hedge ratio") {
    ModelParams p = hedge_world();
    StableAssetParams st = stable_asset();
    EuropeanOption opt = atm_call(p.horizon);
    VarSwapContract c{0.04, 1.0};

    SUBCASE("no leverage and no correlation leaves nothing to hedge") {
        ModelParams q = p;
        q.rho = 0.0;
        StableAssetParams flat = st;
        flat.rho_prime = 0.0;
        CHECK(hedge_ratio(0.1, 100.0, 100.0, 0.04, q, kZ, kZb, flat, opt, c) == 0.0);
    }

    SUBCASE("single-driver form restated with scalar closed forms") {
        ModelParams q = p;
        q.theta = 0.0;
        const double t = 0.1, s = 98.0, y = 103.0, sig = 0.05;
        double got = hedge_ratio(t, s, y, sig, q, kZ, kZb, st, opt, c);

        const double cz = q.rho;  // rho * (1 - 0)
        auto kappa = [&](double u) { return kZ.a * u / (kZ.mu - u); };
        double i2 = kappa(2.0 * cz) - 2.0 * kappa(cz);
        double i3 = kZ.a * kZ.mu * (1.0 / ((kZ.mu - cz) * (kZ.mu - cz)) - 1.0 / (kZ.mu * kZ.mu));
        const double tau = q.horizon - t;
        double sens = std::exp(-q.r * tau) * c.notional * (-std::expm1(-q.lambda * tau)) /
                      (q.lambda * q.horizon);
        double bs_delta = bs_price_delta(y, opt, q.r, st.sigma, t).delta;
        double num = st.rho_prime * st.sigma * std::sqrt(sig) * (y / s) * bs_delta +
                     (q.lambda / s) * sens * i3;
        double denom = sig + q.lambda * i2;
        CHECK(got == doctest::Approx(num / denom).epsilon(1e-14));
    }

    SUBCASE("exactly linear in the swap notional") {
        const double t = 0.2, s = 105.0, y = 97.0, sig = 0.03;
        VarSwapContract c1{0.04, 1.0}, c2{0.04, 2.0}, c3{0.04, 3.0};
        double h1 = hedge_ratio(t, s, y, sig, p, kZ, kZb, st, opt, c1);
        double h2 = hedge_ratio(t, s, y, sig, p, kZ, kZb, st, opt, c2);
        double h3 = hedge_ratio(t, s, y, sig, p, kZ, kZb, st, opt, c3);
        CHECK(h2 - h1 == doctest::Approx(h3 - h2).epsilon(1e-12));
    }

    SUBCASE("rejects states outside the hedging window") {
        CHECK_THROWS_AS(hedge_ratio(p.horizon, 100.0, 100.0, 0.04, p, kZ, kZb, st, opt, c),
                        DomainError);
        CHECK_THROWS_AS(hedge_ratio(0.1, -5.0, 100.0, 0.04, p, kZ, kZb, st, opt, c), DomainError);
        CHECK_THROWS_AS(hedge_ratio(0.1, 100.0, 0.0, 0.04, p, kZ, kZb, st, opt, c), DomainError);
        CHECK_THROWS_AS(hedge_ratio(0.1, 100.0, 100.0, -0.01, p, kZ, kZb, st, opt, c),
                        DomainError);
    }

    SUBCASE("finite and well-defined across a state grid") {
        for (double theta : {0.0, 0.3, 1.0})
            for (double sig : {0.001, 0.04, 0.4}) {
                ModelParams q = p;
                q.theta = theta;
                double h = hedge_ratio(0.25, 90.0, 110.0, sig, q, kZ, kZb, st, opt, c);
                CHECK(std::isfinite(h));
            }
    }
}

TEST_CASE("quadrature hedge ratio cross-validation") {
    ModelParams p = hedge_world();
    StableAssetParams st = stable_asset();
    EuropeanOption opt = atm_call(p.horizon);
    VarSwapContract c{0.05, 1.0};
    const double t = 0.1, s = 102.0, y = 99.0, sig = 0.045, v = 0.006;

    SUBCASE("agrees with the closed form across a parameter grid") {
        for (double theta : {0.0, 0.5, 1.0})
            for (double rho : {-0.3, -1.0, -2.0})
                for (double lambda : {0.5, 1.5, 3.0}) {
                    CAPTURE(theta);
                    CAPTURE(rho);
                    CAPTURE(lambda);
                    ModelParams q = p;
                    q.theta = theta;
                    q.rho = rho;
                    q.lambda = lambda;
                    auto swap_fn = [&](double tt, double ss, double vv) {
                        return price(q, kZ, kZb, c, tt, ss, vv);
                    };
                    double general =
                        hedge_ratio_general(t, s, y, sig, v, q, kZ, kZb, st, opt, swap_fn);
                    double closed = hedge_ratio(t, s, y, sig, q, kZ, kZb, st, opt, c);
                    CHECK(general == doctest::Approx(closed).epsilon(1e-6));
                }
    }

    SUBCASE("a valuation that ignores the variance leaves only the diffusion term") {
        auto const_fn = [](double, double, double) { return 3.7; };
        double got = hedge_ratio_general(t, s, y, sig, v, p, kZ, kZb, st, opt, const_fn);

        const double cz = p.rho * (1.0 - p.theta), czb = p.rho * p.theta;
        double denom = sig +
                       p.lambda * levy_integral(kZ, cz, LevyIntegralKind::ExpMinusOneSquared) +
                       p.lambda * levy_integral(kZb, czb, LevyIntegralKind::ExpMinusOneSquared);
        double num = st.rho_prime * st.sigma * std::sqrt(sig) * (y / s) *
                     bs_price_delta(y, opt, p.r, st.sigma, t).delta;
        CHECK(got == doctest::Approx(num / denom).epsilon(1e-8));
    }

    SUBCASE("doubling the valuation doubles the jump terms") {
        auto swap_fn = [&](double tt, double ss, double vv) {
            return price(p, kZ, kZb, c, tt, ss, vv);
        };
        auto swap_fn2 = [&](double tt, double ss, double vv) {
            return 2.0 * price(p, kZ, kZb, c, tt, ss, vv);
        };
        auto zero_fn = [](double, double, double) { return 0.0; };
        double h0 = hedge_ratio_general(t, s, y, sig, v, p, kZ, kZb, st, opt, zero_fn);
        double h1 = hedge_ratio_general(t, s, y, sig, v, p, kZ, kZb, st, opt, swap_fn);
        double h2 = hedge_ratio_general(t, s, y, sig, v, p, kZ, kZb, st, opt, swap_fn2);
        CHECK(h2 - h1 == doctest::Approx(h1 - h0).epsilon(1e-7));
    }

    SUBCASE("a discontinuous valuation exhausts the bisection budget") {
        auto step_fn = [&](double, double ss, double) { return ss > sig + 0.1 ? 1.0 : 0.0; };
        CHECK_THROWS_AS(hedge_ratio_general(t, s, y, sig, v, p, kZ, kZb, st, opt, step_fn),
                        QuadratureFailure);
    }
}

TEST_CASE("initial capital splits into option and swap values") {
    ModelParams p = hedge_world();
    StableAssetParams st = stable_asset();
    EuropeanOption opt = atm_call(p.horizon);
    VarSwapContract c{0.06, 2.0};
    double cap = initial_capital(p, kZ, kZb, st, opt, c);
    double want = bs_price_delta(st.y0, opt, p.r, st.sigma, 0.0).price +
                  price(p, kZ, kZb, c, 0.0, p.sigma0_sq, 0.0);
    CHECK(cap == doctest::Approx(want).epsilon(1e-15));
}

TEST_CASE("hedging-error harness") {
    ModelParams p = hedge_world();
    StableAssetParams st = stable_asset();
    EuropeanOption opt = atm_call(p.horizon);
    VarSwapContract c{fair_strike(p, kZ, kZb), 1.0};
    const std::size_t steps = 126, n = 10000;
    const std::uint64_t seed = 2718;

    SUBCASE("input validation") {
        CHECK_THROWS_AS(simulate_hedge(p, kZ, kZb, st, opt, c, 0, n, seed,
                                       HedgeStrategy::optimal()),
                        ValidationError);
        CHECK_THROWS_AS(simulate_hedge(p, kZ, kZb, st, opt, c, steps, 1, seed,
                                       HedgeStrategy::optimal()),
                        InsufficientPaths);
        EuropeanOption mismatched = atm_call(0.75);
        CHECK_THROWS_AS(simulate_hedge(p, kZ, kZb, st, mismatched, c, steps, n, seed,
                                       HedgeStrategy::optimal()),
                        ValidationError);
    }

    SUBCASE("optimal strategy has mean error near zero") {
        HedgingErrorStats stats =
            simulate_hedge(p, kZ, kZb, st, opt, c, steps, n, seed, HedgeStrategy::optimal(), 4);
        CHECK(stats.n_paths == n);
        CHECK(stats.errors.size() == n);
        CHECK(std::fabs(stats.mean) < 4.0 * stats.std_error);
    }

    SUBCASE("scaling the ratio away from one raises the error variance") {
        HedgingErrorStats best =
            simulate_hedge(p, kZ, kZb, st, opt, c, steps, n, seed, HedgeStrategy::optimal(), 4);
        for (double f : {0.9, 1.1}) {
            CAPTURE(f);
            HedgingErrorStats worse = simulate_hedge(p, kZ, kZb, st, opt, c, steps, n, seed,
                                                     HedgeStrategy::perturbed(f), 4);
            CHECK(best.variance < worse.variance);
            auto d = paired_sq_diff(worse, best);
            CHECK(d.mean > 3.0 * d.se);  // significant under common random numbers
        }
    }

    SUBCASE("variance over the perturbation grid is minimized at one") {
        std::vector<double> variances;
        for (double f : {0.8, 0.9, 1.0, 1.1, 1.2}) {
            HedgingErrorStats stats = simulate_hedge(p, kZ, kZb, st, opt, c, steps, n, seed,
                                                     HedgeStrategy::perturbed(f), 4);
            variances.push_back(stats.variance);
        }
        for (std::size_t i = 0; i < variances.size(); ++i) {
            if (i != 2) CHECK(variances[2] < variances[i]);
        }
    }

    SUBCASE("hedging beats not hedging when the assets move together") {
        ModelParams q = hedge_world();
        q.rho = 0.0;
        q.lambda = 0.1;
        StableAssetParams tight = stable_asset();
        tight.rho_prime = 1.0;
        tight.sigma = 0.2;
        SubordinatorSpec none_z{0.0, 10.0}, none_zb{0.0, 8.0};
        VarSwapContract swap{fair_strike(q, none_z, none_zb), 1.0};
        HedgingErrorStats hedged = simulate_hedge(q, none_z, none_zb, tight, opt, swap, 64, 4000,
                                                  77, HedgeStrategy::optimal(), 4);
        HedgingErrorStats naked = simulate_hedge(q, none_z, none_zb, tight, opt, swap, 64, 4000,
                                                 77, HedgeStrategy::zero(), 4);
        CHECK(hedged.variance < naked.variance);
        auto d = paired_sq_diff(naked, hedged);
        CHECK(d.mean > 3.0 * d.se);
    }

    SUBCASE("same seed and strategy reproduce the errors bitwise") {
        HedgingErrorStats a =
            simulate_hedge(p, kZ, kZb, st, opt, c, 32, 500, 99, HedgeStrategy::optimal(), 4);
        HedgingErrorStats b =
            simulate_hedge(p, kZ, kZb, st, opt, c, 32, 500, 99, HedgeStrategy::optimal(), 4);
        REQUIRE(a.errors.size() == b.errors.size());
        for (std::size_t i = 0; i < a.errors.size(); ++i) CHECK(a.errors[i] == b.errors[i]);
        CHECK(a.mean == b.mean);
        CHECK(a.variance == b.variance);
        CHECK(a.seed == 99);
    }

    SUBCASE("a unit perturbation is the optimal strategy") {
        HedgingErrorStats a =
            simulate_hedge(p, kZ, kZb, st, opt, c, 32, 500, 7, HedgeStrategy::optimal());
        HedgingErrorStats b =
            simulate_hedge(p, kZ, kZb, st, opt, c, 32, 500, 7, HedgeStrategy::perturbed(1.0));
        for (std::size_t i = 0; i < a.errors.size(); ++i) CHECK(a.errors[i] == b.errors[i]);
    }

    SUBCASE("overriding the mixing weight with its true value changes nothing") {
        HedgingErrorStats a =
            simulate_hedge(p, kZ, kZb, st, opt, c, 32, 500, 7, HedgeStrategy::optimal());
        HedgingErrorStats b = simulate_hedge(p, kZ, kZb, st, opt, c, 32, 500, 7,
                                             HedgeStrategy::optimal_as_if_theta(p.theta));
        for (std::size_t i = 0; i < a.errors.size(); ++i) CHECK(a.errors[i] == b.errors[i]);

        HedgingErrorStats off = simulate_hedge(p, kZ, kZb, st, opt, c, 32, 500, 7,
                                               HedgeStrategy::optimal_as_if_theta(0.0));
        bool any_diff = false;
        for (std::size_t i = 0; i < a.errors.size(); ++i)
            if (off.errors[i] != a.errors[i]) any_diff = true;
        CHECK(any_diff);
    }
}
