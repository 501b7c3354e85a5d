#ifndef BNS_MODEL_HPP
#define BNS_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bns/levy.hpp"
#include "bns/rng.hpp"

namespace bns {

struct PriceSeries;  // features.hpp

// Drift compensation applied to the log price so that the discounted price is
// a martingale under the pricing measure:
//   FullCompensation  b = r - lambda k_z(rho (1-theta)) - lambda k_zb(rho theta) - sigma_t^2 / 2
//   SingleKappa       b = r - lambda k_z(rho) - sigma_t^2 / 2   (classical single-subordinator form,
//                         kept for comparison runs; not a martingale when theta > 0)
enum class DriftMode { FullCompensation, SingleKappa };

std::string drift_mode_name(DriftMode mode);
DriftMode drift_mode_from_name(const std::string& name);

// Stochastic volatility model for the log price X_t = log(S_t / S_0):
//   dX_t       = b_t dt + sigma_t dW_t + rho ((1-theta) dZ_{lambda t} + theta dZb_{lambda t})
//   d sigma_t^2 = -lambda sigma_t^2 dt + (1-theta) dZ_{lambda t} + theta dZb_{lambda t}
// with two independent subordinators Z, Zb mixed by the deterministic weight
// theta in [0, 1] and leverage rho <= 0.
struct ModelParams {
    double s0 = 100.0;
    double sigma0_sq = 0.04;
    double rho = -1.0;
    double lambda = 1.0;
    double theta = 0.0;
    double r = 0.0;
    double horizon = 1.0;  // contract maturity T
    DriftMode drift_mode = DriftMode::FullCompensation;

    void validate() const;
};

struct ModelState {
    double t = 0.0;
    double x = 0.0;         // log return since time 0
    double sigma_sq = 0.0;
    double v = 0.0;         // integrated variance int_0^t sigma_u^2 du
};

struct JumpRecord {
    double t;     // absolute calendar time of the jump
    double size;  // raw subordinator jump size (before the theta weight)
};

// Simulated path on a uniform grid. sigma_sq[i] is the left limit state used
// over step i; v is the trapezoid accumulation of sigma_sq.
struct Path {
    std::vector<double> times;
    std::vector<double> x;
    std::vector<double> s;
    std::vector<double> sigma_sq;
    std::vector<double> v;
    std::vector<JumpRecord> jumps_z;
    std::vector<JumpRecord> jumps_zb;
};

// How many times each subordinator sampler was actually invoked; lets tests
// prove that a weight of exactly 0 or 1 short-circuits the unused stream.
struct SampleCounters {
    std::size_t z_calls = 0;
    std::size_t zb_calls = 0;
};

// Drift rate b_t given the running variance.
double drift(const ModelParams& params, const SubordinatorSpec& z,
             const SubordinatorSpec& zb, double sigma_sq_t);

// Euler scheme for X with exact exponential variance decay between jumps and
// jump-time-exact decay within a step. The three drivers consume independent
// streams so that paths with shared seeds differ only through the driver
// being varied. theta == 0 never samples Zb; theta == 1 never samples Z.
Path simulate_path(const ModelParams& params, const SubordinatorSpec& z,
                   const SubordinatorSpec& zb, std::size_t n_steps,
                   const StreamSeeds& seeds, SampleCounters* counters = nullptr);

// Same scheme started from an arbitrary state; grid covers [state.t, horizon].
Path simulate_path_from(const ModelParams& params, const SubordinatorSpec& z,
                        const SubordinatorSpec& zb, const ModelState& state,
                        std::size_t n_steps, const StreamSeeds& seeds,
                        SampleCounters* counters = nullptr);

// Classical single-subordinator dynamics (no second driver, no mixing weight),
// written as its own loop. With theta = 0 the mixed scheme must reproduce this
// bit for bit on shared seeds.
Path simulate_path_classical(const ModelParams& params, const SubordinatorSpec& z,
                             std::size_t n_steps, const StreamSeeds& seeds);

// Realized variance of a full-horizon path: V_T / T plus the squared-jump
// compensation of both weighted subordinators.
double realized_variance(const Path& path, const ModelParams& params,
                         const SubordinatorSpec& z, const SubordinatorSpec& zb);

// Pearson correlation of X_s and X_t (s <= t) across n_paths simulations;
// s == t returns 1 without simulating.
double estimate_log_return_correlation(const ModelParams& params, const SubordinatorSpec& z,
                                       const SubordinatorSpec& zb, double s, double t,
                                       std::size_t n_paths, std::size_t n_steps,
                                       std::uint64_t seed, int n_threads = 1);

// Daily close series sampled from one simulated path; first price is s0.
PriceSeries synth_series(const ModelParams& params, const SubordinatorSpec& z,
                         const SubordinatorSpec& zb, std::size_t n_days,
                         std::uint64_t seed, double dt = 1.0 / 252.0,
                         const std::string& start_date = "2015-01-02");

} // namespace bns

#endif
