#include "bns/levy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bns/errors.hpp"

namespace bns {

void SubordinatorSpec::validate() const {
    if (!(a >= 0.0) || !std::isfinite(a))
        throw ValidationError("SubordinatorSpec: intensity a must be finite and >= 0");
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw ValidationError("SubordinatorSpec: jump decay mu must be finite and > 0");
}

double cumulant_transform(const SubordinatorSpec& spec, double c) {
    spec.validate();
    if (!(c < spec.mu)) {
        std::ostringstream os;
        os << "cumulant_transform: requires c < mu (c = " << c << ", mu = " << spec.mu << ")";
        throw DomainError(os.str());
    }
    return spec.a * c / (spec.mu - c);
}

Cumulants cumulants(const SubordinatorSpec& spec) {
    spec.validate();
    return Cumulants{spec.a / spec.mu, 2.0 * spec.a / (spec.mu * spec.mu)};
}

double levy_integral(const SubordinatorSpec& spec, double c, LevyIntegralKind kind) {
    spec.validate();
    const double a = spec.a;
    const double mu = spec.mu;
    switch (kind) {
        case LevyIntegralKind::ExpMinusOne:
            return cumulant_transform(spec, c);
        case LevyIntegralKind::ExpMinusOneSquared: {
            if (!(2.0 * c < mu)) {
                std::ostringstream os;
                os << "levy_integral(ExpMinusOneSquared): requires 2c < mu (c = " << c
                   << ", mu = " << mu << ")";
                throw DomainError(os.str());
            }
            return a * (mu / (mu - 2.0 * c) - 2.0 * mu / (mu - c) + 1.0);
        }
        case LevyIntegralKind::XTimesExpMinusOne: {
            if (!(c < mu)) {
                std::ostringstream os;
                os << "levy_integral(XTimesExpMinusOne): requires c < mu (c = " << c
                   << ", mu = " << mu << ")";
                throw DomainError(os.str());
            }
            double d = mu - c;
            return a * mu * (1.0 / (d * d) - 1.0 / (mu * mu));
        }
    }
    throw DomainError("levy_integral: unknown integral kind");
}

double levy_density(const SubordinatorSpec& spec, double x) {
    spec.validate();
    if (x <= 0.0) return 0.0;
    return spec.a * spec.mu * std::exp(-spec.mu * x);
}

SubordinatorIncrement sample_increment(const SubordinatorSpec& spec, double lambda,
                                       double dt, Rng& rng) {
    spec.validate();
    if (!(lambda > 0.0)) throw ValidationError("sample_increment: lambda must be > 0");
    if (!(dt > 0.0)) throw ValidationError("sample_increment: dt must be > 0");
    SubordinatorIncrement inc;
    if (spec.a == 0.0) return inc;  // null subordinator, no RNG consumption

    std::poisson_distribution<int> count_dist(spec.a * lambda * dt);
    std::uniform_real_distribution<double> offset_dist(0.0, dt);
    std::exponential_distribution<double> size_dist(spec.mu);

    int n = count_dist(rng);
    inc.jumps.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double u = offset_dist(rng);
        double x = size_dist(rng);
        inc.jumps.push_back(Jump{u, x});
        inc.total += x;
    }
    std::sort(inc.jumps.begin(), inc.jumps.end(),
              [](const Jump& l, const Jump& r) { return l.time_offset < r.time_offset; });
    return inc;
}

std::vector<SubordinatorIncrement> sample_increments(const SubordinatorSpec& spec,
                                                     double lambda, double dt,
                                                     std::size_t n, Rng& rng) {
    std::vector<SubordinatorIncrement> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample_increment(spec, lambda, dt, rng));
    return out;
}

std::optional<std::string> intensity_ordering_warning(const SubordinatorSpec& z,
                                                      const SubordinatorSpec& zb) {
    double k1_z = cumulants(z).k1;
    double k1_zb = cumulants(zb).k1;
    if (k1_zb <= k1_z) {
        std::ostringstream os;
        os << "second subordinator mean jump rate (" << k1_zb
           << ") does not exceed the first (" << k1_z
           << "); the weight-1 regime will not look more jump-intense";
        return os.str();
    }
    return std::nullopt;
}

void to_json(nlohmann::json& j, const SubordinatorSpec& spec) {
    j = nlohmann::json{{"a", spec.a}, {"mu", spec.mu}, {"family", "compound_poisson_exponential"}};
}

void from_json(const nlohmann::json& j, SubordinatorSpec& spec) {
    if (!j.is_object()) throw ValidationError("subordinator: expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() != "a" && it.key() != "mu" && it.key() != "family")
            throw ValidationError("subordinator: unknown key '" + it.key() + "'");
    }
    if (!j.contains("a") || !j.contains("mu"))
        throw ValidationError("subordinator: keys 'a' and 'mu' are required");
    spec.a = j.at("a").get<double>();
    spec.mu = j.at("mu").get<double>();
    if (j.contains("family")) {
        std::string fam = j.at("family").get<std::string>();
        if (fam != "compound_poisson_exponential")
            throw ValidationError("subordinator: unsupported family '" + fam + "'");
    }
    spec.family = SubordinatorFamily::CompoundPoissonExponential;
    spec.validate();
}

} // namespace bns
