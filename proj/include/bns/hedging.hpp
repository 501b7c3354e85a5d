#ifndef BNS_HEDGING_HPP
#define BNS_HEDGING_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bns/blackscholes.hpp"
#include "bns/levy.hpp"
#include "bns/model.hpp"
#include "bns/varswap.hpp"

namespace bns {

// Second, hedged asset: geometric Brownian motion with constant volatility
// whose driving Brownian motion has correlation rho_prime with the volatile
// asset's diffusion part.
struct StableAssetParams {
    double y0 = 100.0;
    double sigma = 0.2;
    double rho_prime = 0.5;

    void validate() const;
};

// Risk-minimizing position in the volatile asset S for the combined claim
// "European option on Y plus variance swap on S", all closed form:
//
//           rho' sigma_Y sigma_t (Y/S) dC/dY  +  A  +  B
//   phi  =  ---------------------------------------------
//           sigma_t^2 + lambda I2_z(c_z) + lambda I2_zb(c_zb)
//
// where c_z = rho (1-theta), c_zb = rho theta, I2 is the squared-exponential
// jump integral, and A, B capture the variance swap's response to a jump of
// each subordinator (the swap value is linear in sigma_t^2, so they reduce to
// the X(e^{cX}-1) jump integral scaled by the swap's variance sensitivity).
double hedge_ratio(double t, double s, double y, double sigma_sq_t,
                   const ModelParams& params, const SubordinatorSpec& z,
                   const SubordinatorSpec& zb, const StableAssetParams& stable,
                   const EuropeanOption& option, const VarSwapContract& contract);

// Same ratio with every jump integral evaluated by adaptive quadrature against
// an arbitrary swap valuation function (t, sigma_sq, v) -> value, including
// the denominator integrals. Cross-validates the closed form above.
using VarSwapPriceFn = std::function<double(double, double, double)>;

double hedge_ratio_general(double t, double s, double y, double sigma_sq_t, double v_t,
                           const ModelParams& params, const SubordinatorSpec& z,
                           const SubordinatorSpec& zb, const StableAssetParams& stable,
                           const EuropeanOption& option, const VarSwapPriceFn& swap_value,
                           double quad_tol = 1e-9);

// Time-0 value of the combined claim: Black-Scholes value of the option on Y
// plus the variance swap value.
double initial_capital(const ModelParams& params, const SubordinatorSpec& z,
                       const SubordinatorSpec& zb, const StableAssetParams& stable,
                       const EuropeanOption& option, const VarSwapContract& contract);

enum class HedgeStrategyKind { Optimal, Perturbed, Zero };

struct HedgeStrategy {
    HedgeStrategyKind kind = HedgeStrategyKind::Optimal;
    double factor = 1.0;                        // multiplier for Perturbed
    std::optional<double> theta_override;       // hedge computed as if theta were this

    static HedgeStrategy optimal() { return HedgeStrategy{}; }
    static HedgeStrategy perturbed(double f) {
        return HedgeStrategy{HedgeStrategyKind::Perturbed, f, std::nullopt};
    }
    static HedgeStrategy zero() {
        return HedgeStrategy{HedgeStrategyKind::Zero, 0.0, std::nullopt};
    }
    static HedgeStrategy optimal_as_if_theta(double th) {
        return HedgeStrategy{HedgeStrategyKind::Optimal, 1.0, th};
    }
};

struct HedgingErrorStats {
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;      // standard error of the mean
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    std::vector<double> errors;  // one terminal hedging error per path, index = path
};

// Discrete self-financing hedge along simulated paths. Per path:
//   error = sum_k phi_k (S^_{k+1} - S^_k) + initial capital
//           - e^{-rT} (option payoff + variance swap payoff)
// with S^ the discounted volatile asset. Path index p always consumes the
// substreams derived from (seed, p), so two calls with the same seed hedge
// identical worlds and differ only in the strategy (common random numbers).
HedgingErrorStats simulate_hedge(const ModelParams& params, const SubordinatorSpec& z,
                                 const SubordinatorSpec& zb, const StableAssetParams& stable,
                                 const EuropeanOption& option, const VarSwapContract& contract,
                                 std::size_t n_steps, std::size_t n_paths, std::uint64_t seed,
                                 const HedgeStrategy& strategy, int n_threads = 1);

} // namespace bns

#endif
