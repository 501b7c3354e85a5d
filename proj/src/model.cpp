#include "bns/model.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "bns/errors.hpp"
#include "bns/features.hpp"
#include "bns/parallel.hpp"
#include "bns/stats.hpp"

namespace bns {

std::string drift_mode_name(DriftMode mode) {
    switch (mode) {
        case DriftMode::FullCompensation: return "full_compensation";
        case DriftMode::SingleKappa: return "single_kappa";
    }
    return "full_compensation";
}

DriftMode drift_mode_from_name(const std::string& name) {
    if (name == "full_compensation") return DriftMode::FullCompensation;
    if (name == "single_kappa") return DriftMode::SingleKappa;
    throw ValidationError("unknown drift_mode '" + name +
                          "' (expected full_compensation or single_kappa)");
}

void ModelParams::validate() const {
    if (!(s0 > 0.0) || !std::isfinite(s0))
        throw ValidationError("ModelParams: s0 must be finite and > 0");
    if (!(sigma0_sq >= 0.0) || !std::isfinite(sigma0_sq))
        throw ValidationError("ModelParams: sigma0_sq must be finite and >= 0");
    if (!(rho <= 0.0) || !std::isfinite(rho))
        throw ValidationError("ModelParams: leverage rho must be finite and <= 0");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw ValidationError("ModelParams: lambda must be finite and > 0");
    if (!(theta >= 0.0 && theta <= 1.0))
        throw ValidationError("ModelParams: theta must lie in [0, 1]");
    if (!std::isfinite(r))
        throw ValidationError("ModelParams: r must be finite");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw ValidationError("ModelParams: horizon must be finite and > 0");
}

double drift(const ModelParams& params, const SubordinatorSpec& z,
             const SubordinatorSpec& zb, double sigma_sq_t) {
    params.validate();
    if (params.drift_mode == DriftMode::SingleKappa)
        return params.r - params.lambda * cumulant_transform(z, params.rho) - 0.5 * sigma_sq_t;
    double kz = cumulant_transform(z, params.rho * (1.0 - params.theta));
    double kzb = cumulant_transform(zb, params.rho * params.theta);
    return params.r - params.lambda * kz - params.lambda * kzb - 0.5 * sigma_sq_t;
}

namespace {

void check_step_count(std::size_t n_steps) {
    if (n_steps == 0) throw ValidationError("simulate_path: n_steps must be > 0");
}

} // namespace

Path simulate_path_from(const ModelParams& params, const SubordinatorSpec& z,
                        const SubordinatorSpec& zb, const ModelState& state,
                        std::size_t n_steps, const StreamSeeds& seeds,
                        SampleCounters* counters) {
    params.validate();
    z.validate();
    zb.validate();
    check_step_count(n_steps);
    if (!(state.t >= 0.0) || !(state.t < params.horizon))
        throw DomainError("simulate_path_from: state.t must lie in [0, horizon)");
    if (!(state.sigma_sq >= 0.0))
        throw ValidationError("simulate_path_from: sigma_sq must be >= 0");

    const double lambda = params.lambda;
    const double theta = params.theta;
    const double rho = params.rho;
    const double dt = (params.horizon - state.t) / static_cast<double>(n_steps);
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

    Rng w_rng(seeds.w), z_rng(seeds.z), zb_rng(seeds.zb);
    std::normal_distribution<double> normal(0.0, 1.0);

    Path path;
    path.times.resize(n_steps + 1);
    path.x.resize(n_steps + 1);
    path.s.resize(n_steps + 1);
    path.sigma_sq.resize(n_steps + 1);
    path.v.resize(n_steps + 1);

    path.times[0] = state.t;
    path.x[0] = state.x;
    path.s[0] = params.s0 * std::exp(state.x);
    path.sigma_sq[0] = state.sigma_sq;
    path.v[0] = state.v;

    // Variance is tracked as (deterministic decayed initial state) + (decayed
    // jump accumulation). The base term is recomputed from scratch each step,
    // so a jump-free path matches exp(-lambda t) sigma0_sq to the last bit and
    // the accumulated carry can never push sigma_sq below that floor.
    const double sig_base0 = state.sigma_sq;
    double carry = 0.0;

    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t_i = path.times[i];
        const double sig = path.sigma_sq[i];
        const double b = drift_const - 0.5 * sig;
        const double xi = normal(w_rng);
        double dx = b * dt + std::sqrt(sig) * sqdt * xi;
        double jump_carry = 0.0;

        if (use_z) {
            if (counters) ++counters->z_calls;
            SubordinatorIncrement inc = sample_increment(z, lambda, dt, z_rng);
            dx += coeff_z * inc.total;
            for (const Jump& jmp : inc.jumps) {
                jump_carry += wz * (jmp.size * std::exp(-lambda * (dt - jmp.time_offset)));
                path.jumps_z.push_back(JumpRecord{t_i + jmp.time_offset, jmp.size});
            }
        }
        if (use_zb) {
            if (counters) ++counters->zb_calls;
            SubordinatorIncrement inc = sample_increment(zb, lambda, dt, zb_rng);
            dx += coeff_zb * inc.total;
            for (const Jump& jmp : inc.jumps) {
                jump_carry += wzb * (jmp.size * std::exp(-lambda * (dt - jmp.time_offset)));
                path.jumps_zb.push_back(JumpRecord{t_i + jmp.time_offset, jmp.size});
            }
        }

        carry = carry * decay + jump_carry;
        const double rel_next = static_cast<double>(i + 1) * dt;
        const double base_next = std::exp(-lambda * rel_next) * sig_base0;

        path.times[i + 1] = state.t + rel_next;
        path.x[i + 1] = path.x[i] + dx;
        path.s[i + 1] = params.s0 * std::exp(path.x[i + 1]);
        path.sigma_sq[i + 1] = base_next + carry;
        path.v[i + 1] = path.v[i] + 0.5 * (path.sigma_sq[i] + path.sigma_sq[i + 1]) * dt;
    }
    return path;
}

Path simulate_path(const ModelParams& params, const SubordinatorSpec& z,
                   const SubordinatorSpec& zb, std::size_t n_steps,
                   const StreamSeeds& seeds, SampleCounters* counters) {
    ModelState start;
    start.t = 0.0;
    start.x = 0.0;
    start.sigma_sq = params.sigma0_sq;
    start.v = 0.0;
    return simulate_path_from(params, z, zb, start, n_steps, seeds, counters);
}

Path simulate_path_classical(const ModelParams& params, const SubordinatorSpec& z,
                             std::size_t n_steps, const StreamSeeds& seeds) {
    params.validate();
    z.validate();
    check_step_count(n_steps);

    const double lambda = params.lambda;
    const double rho = params.rho;
    const double dt = params.horizon / static_cast<double>(n_steps);
    const double sqdt = std::sqrt(dt);
    const double decay = std::exp(-lambda * dt);
    const double drift_const = params.r - lambda * cumulant_transform(z, rho);

    Rng w_rng(seeds.w), z_rng(seeds.z);
    std::normal_distribution<double> normal(0.0, 1.0);

    Path path;
    path.times.resize(n_steps + 1);
    path.x.resize(n_steps + 1);
    path.s.resize(n_steps + 1);
    path.sigma_sq.resize(n_steps + 1);
    path.v.resize(n_steps + 1);

    path.times[0] = 0.0;
    path.x[0] = 0.0;
    path.s[0] = params.s0;
    path.sigma_sq[0] = params.sigma0_sq;
    path.v[0] = 0.0;

    const double sig_base0 = params.sigma0_sq;
    double carry = 0.0;

    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t_i = path.times[i];
        const double sig = path.sigma_sq[i];
        const double b = drift_const - 0.5 * sig;
        const double xi = normal(w_rng);
        double dx = b * dt + std::sqrt(sig) * sqdt * xi;
        double jump_carry = 0.0;

        SubordinatorIncrement inc = sample_increment(z, lambda, dt, z_rng);
        dx += rho * inc.total;
        for (const Jump& jmp : inc.jumps) {
            jump_carry += jmp.size * std::exp(-lambda * (dt - jmp.time_offset));
            path.jumps_z.push_back(JumpRecord{t_i + jmp.time_offset, jmp.size});
        }

        carry = carry * decay + jump_carry;
        const double rel_next = static_cast<double>(i + 1) * dt;
        const double base_next = std::exp(-lambda * rel_next) * sig_base0;

        path.times[i + 1] = rel_next;
        path.x[i + 1] = path.x[i] + dx;
        path.s[i + 1] = params.s0 * std::exp(path.x[i + 1]);
        path.sigma_sq[i + 1] = base_next + carry;
        path.v[i + 1] = path.v[i] + 0.5 * (path.sigma_sq[i] + path.sigma_sq[i + 1]) * dt;
    }
    return path;
}

double realized_variance(const Path& path, const ModelParams& params,
                         const SubordinatorSpec& z, const SubordinatorSpec& zb) {
    if (path.v.empty()) throw ValidationError("realized_variance: empty path");
    const double c_z = params.rho * (1.0 - params.theta);
    const double c_zb = params.rho * params.theta;
    return path.v.back() / params.horizon +
           c_z * c_z * params.lambda * cumulants(z).k2 +
           c_zb * c_zb * params.lambda * cumulants(zb).k2;
}

double estimate_log_return_correlation(const ModelParams& params, const SubordinatorSpec& z,
                                       const SubordinatorSpec& zb, double s, double t,
                                       std::size_t n_paths, std::size_t n_steps,
                                       std::uint64_t seed, int n_threads) {
    params.validate();
    if (!(0.0 < s && s <= t && t <= params.horizon))
        throw DomainError("estimate_log_return_correlation: need 0 < s <= t <= horizon");
    if (n_paths < 100)
        throw InsufficientPaths("estimate_log_return_correlation: need at least 100 paths");
    check_step_count(n_steps);

    const double dt = params.horizon / static_cast<double>(n_steps);
    auto grid_index = [&](double u) {
        std::size_t idx = static_cast<std::size_t>(std::llround(u / dt));
        if (idx > n_steps) idx = n_steps;
        return idx;
    };
    const std::size_t is = grid_index(s);
    const std::size_t it = grid_index(t);
    if (is == it) return 1.0;  // same variable

    std::vector<double> xs(n_paths), xt(n_paths);
    parallel_for(n_paths, n_threads, [&](std::size_t p) {
        Path path = simulate_path(params, z, zb, n_steps, path_stream_seeds(seed, p));
        xs[p] = path.x[is];
        xt[p] = path.x[it];
    });
    return pearson_correlation(xs, xt);
}

PriceSeries synth_series(const ModelParams& params, const SubordinatorSpec& z,
                         const SubordinatorSpec& zb, std::size_t n_days,
                         std::uint64_t seed, double dt, const std::string& start_date) {
    if (n_days < 30) throw ValidationError("synth_series: need at least 30 days");
    if (!(dt > 0.0)) throw ValidationError("synth_series: dt must be > 0");

    ModelParams p = params;
    p.horizon = static_cast<double>(n_days - 1) * dt;
    Path path = simulate_path(p, z, zb, n_days - 1, path_stream_seeds(seed, 0));

    int yy = 0, mm = 0, dd = 0;
    if (std::sscanf(start_date.c_str(), "%d-%d-%d", &yy, &mm, &dd) != 3)
        throw ParseError("synth_series: start_date must be YYYY-MM-DD");
    std::chrono::year_month_day ymd{std::chrono::year{yy}, std::chrono::month{static_cast<unsigned>(mm)},
                                    std::chrono::day{static_cast<unsigned>(dd)}};
    if (!ymd.ok()) throw ParseError("synth_series: invalid start_date");
    std::chrono::sys_days day0{ymd};

    PriceSeries series;
    series.dates.reserve(n_days);
    series.prices.reserve(n_days);
    for (std::size_t i = 0; i < n_days; ++i) {
        std::chrono::year_month_day d{day0 + std::chrono::days{static_cast<int>(i)}};
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                      static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
        series.dates.emplace_back(buf);
        series.prices.push_back(path.s[i]);
    }
    series.validate();
    return series;
}

} // namespace bns
