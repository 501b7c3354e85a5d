#include "bns/varswap.hpp"

#include <cmath>

#include "bns/errors.hpp"

namespace bns {

void VarSwapContract::validate() const {
    if (!(strike >= 0.0) || !std::isfinite(strike))
        throw ValidationError("VarSwapContract: strike must be finite and >= 0");
    if (!(notional > 0.0) || !std::isfinite(notional))
        throw ValidationError("VarSwapContract: notional must be finite and > 0");
}

double payoff(const VarSwapContract& contract, double realized_var) {
    contract.validate();
    return (realized_var - contract.strike) * contract.notional;
}

double conditional_expected_rv(const ModelParams& params, const SubordinatorSpec& z,
                               const SubordinatorSpec& zb, double t, double sigma_sq_t,
                               double v_t) {
    params.validate();
    z.validate();
    zb.validate();
    if (!(t >= 0.0 && t <= params.horizon))
        throw DomainError("conditional_expected_rv: t must lie in [0, horizon]");
    if (!(sigma_sq_t >= 0.0))
        throw ValidationError("conditional_expected_rv: sigma_sq_t must be >= 0");
    if (!(v_t >= 0.0))
        throw ValidationError("conditional_expected_rv: v_t must be >= 0");

    const double T = params.horizon;
    const double lambda = params.lambda;
    const double theta = params.theta;
    const double tau = T - t;
    const double eps = (1.0 - std::exp(-lambda * tau)) / lambda;
    const double mixed_k1 = cumulants(z).k1 * (1.0 - theta) + cumulants(zb).k1 * theta;

    const double integrated_part = (v_t + eps * sigma_sq_t + mixed_k1 * (tau - eps)) / T;
    const double c_z = params.rho * (1.0 - theta);
    const double c_zb = params.rho * theta;
    const double jump_penalty = c_z * c_z * lambda * cumulants(z).k2 +
                                c_zb * c_zb * lambda * cumulants(zb).k2;
    return integrated_part + jump_penalty;
}

double price(const ModelParams& params, const SubordinatorSpec& z, const SubordinatorSpec& zb,
             const VarSwapContract& contract, double t, double sigma_sq_t, double v_t) {
    contract.validate();
    const double expected = conditional_expected_rv(params, z, zb, t, sigma_sq_t, v_t);
    return std::exp(-params.r * (params.horizon - t)) * (expected - contract.strike) *
           contract.notional;
}

double fair_strike(const ModelParams& params, const SubordinatorSpec& z,
                   const SubordinatorSpec& zb) {
    return conditional_expected_rv(params, z, zb, 0.0, params.sigma0_sq, 0.0);
}

} // namespace bns
