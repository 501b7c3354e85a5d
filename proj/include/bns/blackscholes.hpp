#ifndef BNS_BLACKSCHOLES_HPP
#define BNS_BLACKSCHOLES_HPP

namespace bns {

enum class OptionKind { Call, Put };

struct EuropeanOption {
    double strike = 100.0;
    double expiry = 1.0;
    OptionKind kind = OptionKind::Call;

    void validate() const;
};

double option_payoff(const EuropeanOption& option, double y);

double normal_cdf(double x);

struct PriceDelta {
    double price;
    double delta;  // derivative in the underlying
};

// Black-Scholes price and delta of the option on an asset at level y with
// constant volatility sigma, evaluated at time t < expiry.
PriceDelta bs_price_delta(double y, const EuropeanOption& option, double r, double sigma,
                          double t);

} // namespace bns

#endif
