#include "bns/hedging.hpp"

#include <cmath>

#include "bns/errors.hpp"
#include "bns/parallel.hpp"
#include "bns/quadrature.hpp"
#include "bns/stats.hpp"

namespace bns {

void StableAssetParams::validate() const {
    if (!(y0 > 0.0) || !std::isfinite(y0))
        throw ValidationError("StableAssetParams: y0 must be finite and > 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw ValidationError("StableAssetParams: sigma must be finite and > 0");
    if (!(rho_prime >= -1.0 && rho_prime <= 1.0))
        throw ValidationError("StableAssetParams: rho_prime must lie in [-1, 1]");
}

namespace {

void check_hedge_state(double t, double s, double y, double sigma_sq_t,
                       const ModelParams& params, const EuropeanOption& option) {
    if (!(t >= 0.0) || !(t < params.horizon) || !(t < option.expiry))
        throw DomainError("hedge_ratio: t must lie in [0, min(horizon, expiry))");
    if (!(s > 0.0)) throw DomainError("hedge_ratio: s must be > 0");
    if (!(y > 0.0)) throw DomainError("hedge_ratio: y must be > 0");
    if (!(sigma_sq_t >= 0.0)) throw DomainError("hedge_ratio: sigma_sq_t must be >= 0");
}

// Sensitivity of the variance swap value to the running variance:
// dP/d(sigma^2) = e^{-r tau} N (1 - e^{-lambda tau}) / (lambda T).
double swap_variance_sensitivity(const ModelParams& params, const VarSwapContract& contract,
                                 double t) {
    const double tau = params.horizon - t;
    const double omexp = -std::expm1(-params.lambda * tau);
    return std::exp(-params.r * tau) * contract.notional * omexp /
           (params.lambda * params.horizon);
}

double diffusion_numerator(double t, double s, double y, double sigma_sq_t,
                           const ModelParams& params, const StableAssetParams& stable,
                           const EuropeanOption& option) {
    const double bs_delta = bs_price_delta(y, option, params.r, stable.sigma, t).delta;
    return stable.rho_prime * stable.sigma * std::sqrt(sigma_sq_t) * (y / s) * bs_delta;
}

} // namespace

double hedge_ratio(double t, double s, double y, double sigma_sq_t,
                   const ModelParams& params, const SubordinatorSpec& z,
                   const SubordinatorSpec& zb, const StableAssetParams& stable,
                   const EuropeanOption& option, const VarSwapContract& contract) {
    params.validate();
    stable.validate();
    contract.validate();
    check_hedge_state(t, s, y, sigma_sq_t, params, option);

    const double theta = params.theta;
    const double c_z = params.rho * (1.0 - theta);
    const double c_zb = params.rho * theta;
    const double lambda = params.lambda;

    const double denom = sigma_sq_t +
                         lambda * levy_integral(z, c_z, LevyIntegralKind::ExpMinusOneSquared) +
                         lambda * levy_integral(zb, c_zb, LevyIntegralKind::ExpMinusOneSquared);

    const double sens = swap_variance_sensitivity(params, contract, t);
    const double jump_z = (lambda / s) * sens * (1.0 - theta) *
                          levy_integral(z, c_z, LevyIntegralKind::XTimesExpMinusOne);
    const double jump_zb = (lambda / s) * sens * theta *
                           levy_integral(zb, c_zb, LevyIntegralKind::XTimesExpMinusOne);

    const double num = diffusion_numerator(t, s, y, sigma_sq_t, params, stable, option) +
                       jump_z + jump_zb;
    return num / denom;
}

double hedge_ratio_general(double t, double s, double y, double sigma_sq_t, double v_t,
                           const ModelParams& params, const SubordinatorSpec& z,
                           const SubordinatorSpec& zb, const StableAssetParams& stable,
                           const EuropeanOption& option, const VarSwapPriceFn& swap_value,
                           double quad_tol) {
    params.validate();
    stable.validate();
    z.validate();
    zb.validate();
    check_hedge_state(t, s, y, sigma_sq_t, params, option);
    if (!(v_t >= 0.0)) throw DomainError("hedge_ratio_general: v_t must be >= 0");

    const double theta = params.theta;
    const double lambda = params.lambda;
    const double base_value = swap_value(t, sigma_sq_t, v_t);

    struct Driver {
        const SubordinatorSpec* spec;
        double c;       // exponent in the price jump factor
        double weight;  // share of the subordinator jump entering the variance
    };
    const Driver drivers[2] = {
        {&z, params.rho * (1.0 - theta), 1.0 - theta},
        {&zb, params.rho * theta, theta},
    };

    double denom = sigma_sq_t;
    double num = diffusion_numerator(t, s, y, sigma_sq_t, params, stable, option);

    for (const Driver& d : drivers) {
        if (d.spec->a == 0.0) continue;
        const double upper = 60.0 / d.spec->mu;
        denom += lambda * integrate_adaptive(
                              [&](double x) {
                                  double e = std::exp(d.c * x) - 1.0;
                                  return e * e * levy_density(*d.spec, x);
                              },
                              0.0, upper, quad_tol);
        num += (lambda / s) * integrate_adaptive(
                                  [&](double x) {
                                      double bumped =
                                          swap_value(t, sigma_sq_t + d.weight * x, v_t);
                                      return (bumped - base_value) *
                                             (std::exp(d.c * x) - 1.0) *
                                             levy_density(*d.spec, x);
                                  },
                                  0.0, upper, quad_tol);
    }
    return num / denom;
}

double initial_capital(const ModelParams& params, const SubordinatorSpec& z,
                       const SubordinatorSpec& zb, const StableAssetParams& stable,
                       const EuropeanOption& option, const VarSwapContract& contract) {
    params.validate();
    stable.validate();
    const double option_value =
        bs_price_delta(stable.y0, option, params.r, stable.sigma, 0.0).price;
    const double swap_value = price(params, z, zb, contract, 0.0, params.sigma0_sq, 0.0);
    return option_value + swap_value;
}

HedgingErrorStats simulate_hedge(const ModelParams& params, const SubordinatorSpec& z,
                                 const SubordinatorSpec& zb, const StableAssetParams& stable,
                                 const EuropeanOption& option, const VarSwapContract& contract,
                                 std::size_t n_steps, std::size_t n_paths, std::uint64_t seed,
                                 const HedgeStrategy& strategy, int n_threads) {
    params.validate();
    z.validate();
    zb.validate();
    stable.validate();
    option.validate();
    contract.validate();
    if (n_steps == 0) throw ValidationError("simulate_hedge: n_steps must be > 0");
    if (n_paths < 2) throw InsufficientPaths("simulate_hedge: need at least 2 paths");
    if (std::fabs(option.expiry - params.horizon) > 1e-12 * params.horizon)
        throw ValidationError("simulate_hedge: option expiry must match the swap horizon");

    ModelParams hedge_params = params;
    if (strategy.theta_override) {
        hedge_params.theta = *strategy.theta_override;
        hedge_params.validate();
    }
    const double factor = strategy.kind == HedgeStrategyKind::Perturbed ? strategy.factor : 1.0;
    const bool trade = strategy.kind != HedgeStrategyKind::Zero;

    const double lambda = params.lambda;
    const double theta = params.theta;
    const double rho = params.rho;
    const double dt = params.horizon / static_cast<double>(n_steps);
    const double sqdt = std::sqrt(dt);
    const double decay = std::exp(-lambda * dt);
    const double coeff_z = rho * (1.0 - theta);
    const double coeff_zb = rho * theta;
    const double wz = 1.0 - theta;
    const double wzb = theta;
    const bool use_z = theta < 1.0;
    const bool use_zb = theta > 0.0;

    double drift_const;
    if (params.drift_mode == DriftMode::SingleKappa) {
        drift_const = params.r - lambda * cumulant_transform(z, rho);
    } else {
        drift_const = params.r - lambda * cumulant_transform(z, coeff_z) -
                      lambda * cumulant_transform(zb, coeff_zb);
    }

    const double pi0 = initial_capital(params, z, zb, stable, option, contract);
    const double df_T = std::exp(-params.r * params.horizon);
    const double y_drift = (params.r - 0.5 * stable.sigma * stable.sigma) * dt;
    const double y_orth = std::sqrt(1.0 - stable.rho_prime * stable.rho_prime);
    const double jump_penalty = coeff_z * coeff_z * lambda * cumulants(z).k2 +
                                coeff_zb * coeff_zb * lambda * cumulants(zb).k2;

    HedgingErrorStats out;
    out.n_paths = n_paths;
    out.seed = seed;
    out.errors.resize(n_paths);

    parallel_for(n_paths, n_threads, [&](std::size_t p) {
        StreamSeeds sds = path_stream_seeds(seed, p);
        Rng w_rng(sds.w), z_rng(sds.z), zb_rng(sds.zb), aux_rng(sds.aux);
        std::normal_distribution<double> normal(0.0, 1.0);

        double x = 0.0;
        double s_cur = params.s0;
        double sig = params.sigma0_sq;
        double v = 0.0;
        double y_cur = stable.y0;
        double carry = 0.0;
        double disc_prev = 1.0;
        double gains = 0.0;

        for (std::size_t k = 0; k < n_steps; ++k) {
            const double t_k = static_cast<double>(k) * dt;
            double phi = 0.0;
            if (trade) {
                phi = factor * hedge_ratio(t_k, s_cur, y_cur, sig, hedge_params, z, zb,
                                           stable, option, contract);
            }

            const double xi = normal(w_rng);
            double dx = (drift_const - 0.5 * sig) * dt + std::sqrt(sig) * sqdt * xi;
            double jump_carry = 0.0;
            if (use_z) {
                SubordinatorIncrement inc = sample_increment(z, lambda, dt, z_rng);
                dx += coeff_z * inc.total;
                for (const Jump& jmp : inc.jumps)
                    jump_carry += wz * (jmp.size * std::exp(-lambda * (dt - jmp.time_offset)));
            }
            if (use_zb) {
                SubordinatorIncrement inc = sample_increment(zb, lambda, dt, zb_rng);
                dx += coeff_zb * inc.total;
                for (const Jump& jmp : inc.jumps)
                    jump_carry += wzb * (jmp.size * std::exp(-lambda * (dt - jmp.time_offset)));
            }
            const double xi_perp = normal(aux_rng);

            carry = carry * decay + jump_carry;
            const double rel_next = static_cast<double>(k + 1) * dt;
            const double sig_next = std::exp(-lambda * rel_next) * params.sigma0_sq + carry;

            x += dx;
            const double s_next = params.s0 * std::exp(x);
            v += 0.5 * (sig + sig_next) * dt;
            y_cur *= std::exp(y_drift + stable.sigma * sqdt *
                                            (stable.rho_prime * xi + y_orth * xi_perp));

            const double disc_next = std::exp(-params.r * rel_next);
            gains += phi * (disc_next * s_next - disc_prev * s_cur);

            s_cur = s_next;
            sig = sig_next;
            disc_prev = disc_next;
        }

        const double rv = v / params.horizon + jump_penalty;
        const double liability = df_T * (option_payoff(option, y_cur) + payoff(contract, rv));
        out.errors[p] = gains + pi0 - liability;
    });

    RunningStats acc;
    for (double e : out.errors) acc.add(e);
    out.mean = acc.mean();
    out.variance = acc.variance();
    out.std_error = acc.std_error();
    return out;
}

} // namespace bns
