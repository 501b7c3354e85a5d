#ifndef BNS_PIPELINE_HPP
#define BNS_PIPELINE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bns/classify.hpp"
#include "bns/features.hpp"
#include "bns/hedging.hpp"

namespace bns {

enum class Approach { Volatility, Duration };
enum class ModelKind { Logistic, Mlp };

std::string approach_name(Approach a);
Approach approach_from_name(const std::string& name);
std::string model_kind_name(ModelKind m);
ModelKind model_kind_from_name(const std::string& name);

struct ExperimentSpec {
    Approach approach = Approach::Volatility;
    IndexRange train_range{1, 0};
    IndexRange test_range{1, 0};
    std::vector<ModelKind> models = {ModelKind::Logistic, ModelKind::Mlp};
    std::size_t window = 0;  // 0 = approach default (20 volatility, 10 duration)
    double crash_quantile = 0.90;
    std::size_t min_duration = 2;
    std::size_t min_count = 2;
    bool standardize = true;
    LeakagePolicy leakage = LeakagePolicy::Prune;
    LogisticConfig logistic;
    MlpConfig mlp;
    std::uint64_t seed = 42;

    std::size_t effective_window() const;
};

struct ExperimentResult {
    std::map<std::string, ClassificationReport> reports;
    std::map<std::string, double> positive_fraction;       // share of test predictions = 1
    std::map<std::string, std::vector<int>> predictions;   // per model, test rows in order
    std::map<std::string, nlohmann::json> models_json;
    std::vector<std::size_t> test_origin_index;
    std::vector<int> test_targets;
    std::string best_model;       // highest class-1 f1; ties keep the earlier model
    double predicted_theta = 0.0; // positive fraction of the best model
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::size_t pruned_rows = 0;
};

// Label -> split -> train -> report -> summarize the test-range positive
// fraction of the best model as the extracted mixing weight. Model training
// seeds are derived from spec.seed so a single seed fixes the whole run.
ExperimentResult run_experiment(const ExperimentSpec& spec, const PriceSeries& series);

struct HedgeComparisonRow {
    double theta_candidate;
    double mean;
    double variance;
    double std_error;
};

// World simulated under params_base.theta; the hedge is computed as if theta
// were each candidate. Same seed for every candidate, so rows differ only
// through the hedge (common random numbers).
std::vector<HedgeComparisonRow> compare_hedging(
    const ModelParams& params_base, const SubordinatorSpec& z, const SubordinatorSpec& zb,
    const StableAssetParams& stable, const EuropeanOption& option,
    const VarSwapContract& contract, const std::vector<double>& theta_candidates,
    std::size_t n_steps, std::size_t n_paths, std::uint64_t seed, int n_threads = 1);

} // namespace bns

#endif
