#include "bns/blackscholes.hpp"

#include <cmath>

#include "bns/errors.hpp"

namespace bns {

void EuropeanOption::validate() const {
    if (!(strike > 0.0) || !std::isfinite(strike))
        throw ValidationError("EuropeanOption: strike must be finite and > 0");
    if (!(expiry > 0.0) || !std::isfinite(expiry))
        throw ValidationError("EuropeanOption: expiry must be finite and > 0");
}

double option_payoff(const EuropeanOption& option, double y) {
    option.validate();
    if (option.kind == OptionKind::Call) return y > option.strike ? y - option.strike : 0.0;
    return y < option.strike ? option.strike - y : 0.0;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

PriceDelta bs_price_delta(double y, const EuropeanOption& option, double r, double sigma,
                          double t) {
    option.validate();
    if (!(y > 0.0)) throw DomainError("bs_price_delta: asset level must be > 0");
    if (!(sigma > 0.0)) throw DomainError("bs_price_delta: sigma must be > 0");
    if (!(t < option.expiry)) throw DomainError("bs_price_delta: requires t < expiry");

    const double tau = option.expiry - t;
    const double srt = sigma * std::sqrt(tau);
    const double d1 = (std::log(y / option.strike) + (r + 0.5 * sigma * sigma) * tau) / srt;
    const double d2 = d1 - srt;
    const double df = std::exp(-r * tau);

    if (option.kind == OptionKind::Call) {
        double nd1 = normal_cdf(d1);
        return PriceDelta{y * nd1 - option.strike * df * normal_cdf(d2), nd1};
    }
    double nmd1 = normal_cdf(-d1);
    return PriceDelta{option.strike * df * normal_cdf(-d2) - y * nmd1, -nmd1};
}

} // namespace bns
