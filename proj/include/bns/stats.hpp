#ifndef BNS_STATS_HPP
#define BNS_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "bns/errors.hpp"

namespace bns {

// Welford accumulator for mean / sample variance / standard error.
class RunningStats {
public:
    void add(double x) {
        ++n_;
        double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const {
        if (n_ < 2) return 0.0;
        return m2_ / static_cast<double>(n_ - 1);
    }
    double stddev() const { return std::sqrt(variance()); }
    double std_error() const {
        if (n_ == 0) return 0.0;
        return stddev() / std::sqrt(static_cast<double>(n_));
    }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

inline RunningStats accumulate(const std::vector<double>& xs) {
    RunningStats s;
    for (double x : xs) s.add(x);
    return s;
}

inline double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ShapeMismatch("pearson_correlation: need two equal-length vectors of size >= 2");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// Linear-interpolation quantile on a copy of the data, q in [0, 1].
inline double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw ValidationError("quantile: empty sample");
    if (q < 0.0 || q > 1.0) throw DomainError("quantile: q must lie in [0, 1]");
    std::sort(xs.begin(), xs.end());
    double pos = q * static_cast<double>(xs.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= xs.size()) return xs.back();
    double frac = pos - static_cast<double>(lo);
    return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

inline double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

} // namespace bns

#endif
