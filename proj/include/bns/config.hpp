#ifndef BNS_CONFIG_HPP
#define BNS_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bns/hedging.hpp"
#include "bns/pipeline.hpp"

namespace bns {

struct SimulateConfig {
    std::size_t n_paths = 100;
    std::size_t n_steps = 252;
    std::size_t write_paths = 3;  // how many individual path CSVs to emit
};

struct PriceConfig {
    double t = 0.0;
    std::optional<double> sigma_sq_t;  // defaults to the model's initial variance
    double v_t = 0.0;
    bool mc_check = false;
    std::size_t mc_paths = 20000;
    std::size_t mc_steps = 126;
};

struct HedgeConfig {
    std::size_t n_paths = 2000;
    std::size_t n_steps = 126;
    std::vector<double> factors = {0.9, 1.1};      // perturbed strategies to run
    std::vector<double> theta_candidates;          // non-empty: also run the theta comparison
};

struct FeaturesConfig {
    Approach approach = Approach::Volatility;
    std::size_t window = 0;  // 0 = approach default
    double crash_quantile = 0.90;
    std::size_t min_duration = 2;
    std::size_t min_count = 2;
};

struct ExperimentConfig {
    IndexRange train_range{1, 0};
    IndexRange test_range{1, 0};
    std::vector<ModelKind> models = {ModelKind::Logistic, ModelKind::Mlp};
    bool standardize = true;
    LeakagePolicy leakage = LeakagePolicy::Prune;
    LogisticConfig logistic;
    MlpConfig mlp;
    std::size_t synth_days = 0;  // non-zero: generate the input series from the model
};

struct Config {
    std::uint64_t seed = 42;
    bool seed_present = false;  // whether the config file carried a seed
    std::string output_dir = "out";
    ModelParams model;
    SubordinatorSpec z{1.0, 10.0};
    SubordinatorSpec zb{2.0, 8.0};
    StableAssetParams stable;
    EuropeanOption option;
    VarSwapContract contract;
    SimulateConfig simulate;
    PriceConfig price;
    HedgeConfig hedge;
    FeaturesConfig features;
    ExperimentConfig experiment;

    ExperimentSpec experiment_spec() const;  // combines labeling + split + seed
};

// Strict parsers: any unknown key raises ValidationError naming it.
Config config_from_json(const nlohmann::json& j);
Config load_config(const std::string& path);

// Applies `dotted.key=value` onto the raw JSON tree before parsing; the value
// is parsed as JSON when possible, else taken as a string.
void apply_override(nlohmann::json& j, const std::string& assignment);

std::string leakage_policy_name(LeakagePolicy policy);
LeakagePolicy leakage_policy_from_name(const std::string& name);

} // namespace bns

#endif
