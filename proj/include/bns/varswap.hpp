#ifndef BNS_VARSWAP_HPP
#define BNS_VARSWAP_HPP

#include "bns/levy.hpp"
#include "bns/model.hpp"

namespace bns {

// Variance swap paying (realized variance - strike) * notional at maturity.
struct VarSwapContract {
    double strike = 0.0;    // strike in variance units
    double notional = 1.0;

    void validate() const;
};

double payoff(const VarSwapContract& contract, double realized_var);

// E[realized variance | state at time t]. Closed form: the integrated-variance
// part decays the current variance at rate lambda and accrues the mixed mean
// jump inflow, the jump-penalty part is deterministic.
double conditional_expected_rv(const ModelParams& params, const SubordinatorSpec& z,
                               const SubordinatorSpec& zb, double t, double sigma_sq_t,
                               double v_t);

// Discounted conditional expectation of the payoff.
double price(const ModelParams& params, const SubordinatorSpec& z, const SubordinatorSpec& zb,
             const VarSwapContract& contract, double t, double sigma_sq_t, double v_t);

// Strike that makes the time-0 price zero.
double fair_strike(const ModelParams& params, const SubordinatorSpec& z,
                   const SubordinatorSpec& zb);

} // namespace bns

#endif
