#ifndef BNS_LEVY_HPP
#define BNS_LEVY_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bns/rng.hpp"

namespace bns {

// Compound Poisson subordinator with exponential jump sizes.
// Levy density on (0, inf):  nu(dx) = a * mu * exp(-mu x) dx,
// i.e. jump arrival rate a per unit of operational time and
// Exp(mu) distributed jump sizes (mean 1/mu).
enum class SubordinatorFamily { CompoundPoissonExponential };

struct SubordinatorSpec {
    double a = 1.0;   // arrival intensity, a >= 0 (a = 0 is the null subordinator)
    double mu = 1.0;  // jump-size decay rate, mu > 0
    SubordinatorFamily family = SubordinatorFamily::CompoundPoissonExponential;

    void validate() const;
};

// Cumulant transform kappa(c) = integral (e^{cx} - 1) nu(dx) = a c / (mu - c), c < mu.
double cumulant_transform(const SubordinatorSpec& spec, double c);

struct Cumulants {
    double k1;  // mean jump contribution per unit operational time, a / mu
    double k2;  // second cumulant, 2 a / mu^2
};
Cumulants cumulants(const SubordinatorSpec& spec);

// Closed-form integrals of f(x) nu(dx) over (0, inf) used by the pricing and
// hedging formulas. All require c < mu; ExpMinusOneSquared requires 2c < mu.
enum class LevyIntegralKind {
    ExpMinusOne,         // f(x) = e^{cx} - 1           (equals the cumulant transform)
    ExpMinusOneSquared,  // f(x) = (e^{cx} - 1)^2
    XTimesExpMinusOne,   // f(x) = x (e^{cx} - 1)
};
double levy_integral(const SubordinatorSpec& spec, double c, LevyIntegralKind kind);

// Levy density itself, for quadrature cross-checks.
double levy_density(const SubordinatorSpec& spec, double x);

struct Jump {
    double time_offset;  // calendar offset within the step, in (0, dt)
    double size;
};

// Increment of t -> Z_{lambda t} over one calendar step of length dt:
// jump count ~ Poisson(a lambda dt), sizes Exp(mu), offsets uniform in the
// step and sorted. a = 0 returns an empty increment without touching the RNG.
struct SubordinatorIncrement {
    double total = 0.0;
    std::vector<Jump> jumps;
};

SubordinatorIncrement sample_increment(const SubordinatorSpec& spec, double lambda,
                                       double dt, Rng& rng);

std::vector<SubordinatorIncrement> sample_increments(const SubordinatorSpec& spec,
                                                     double lambda, double dt,
                                                     std::size_t n, Rng& rng);

// Second subordinator is meant to carry the higher jump intensity; returns a
// human-readable warning when the means are ordered the other way.
std::optional<std::string> intensity_ordering_warning(const SubordinatorSpec& z,
                                                      const SubordinatorSpec& zb);

void to_json(nlohmann::json& j, const SubordinatorSpec& spec);
void from_json(const nlohmann::json& j, SubordinatorSpec& spec);

} // namespace bns

#endif
