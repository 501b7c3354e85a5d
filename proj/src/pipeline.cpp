#include "bns/pipeline.hpp"

#include "bns/errors.hpp"
#include "bns/rng.hpp"

namespace bns {

std::string approach_name(Approach a) {
    return a == Approach::Volatility ? "volatility" : "duration";
}

Approach approach_from_name(const std::string& name) {
    if (name == "volatility") return Approach::Volatility;
    if (name == "duration") return Approach::Duration;
    throw ValidationError("unknown approach '" + name + "' (expected volatility or duration)");
}

std::string model_kind_name(ModelKind m) {
    return m == ModelKind::Logistic ? "LR" : "MLP";
}

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "LR") return ModelKind::Logistic;
    if (name == "MLP") return ModelKind::Mlp;
    throw ValidationError("unknown model '" + name + "' (expected LR or MLP)");
}

std::size_t ExperimentSpec::effective_window() const {
    if (window != 0) return window;
    return approach == Approach::Volatility ? 20 : 10;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const PriceSeries& series) {
    if (spec.models.empty()) throw EmptyModelSet("run_experiment: no models configured");
    if (spec.test_range.empty())
        throw ValidationError("run_experiment: empty test range");

    const std::size_t w = spec.effective_window();
    LabeledDataset dataset =
        spec.approach == Approach::Volatility
            ? label_volatility(series, w, spec.crash_quantile)
            : label_duration(series, w, spec.min_duration, spec.min_count);

    SplitResult split =
        train_test_split_by_index(dataset, spec.train_range, spec.test_range, spec.leakage);
    if (split.train.targets.empty())
        throw ValidationError("run_experiment: no training rows in the train range");
    if (split.test.targets.empty())
        throw ValidationError("run_experiment: no test rows in the test range");

    FeatureMatrix train_x = split.train.features;
    FeatureMatrix test_x = split.test.features;
    if (spec.standardize) {
        Standardizer std_fit = Standardizer::fit(train_x);
        train_x = std_fit.transform(train_x);
        test_x = std_fit.transform(test_x);
    }

    ExperimentResult result;
    result.train_rows = split.train.targets.size();
    result.test_rows = split.test.targets.size();
    result.pruned_rows = split.pruned_train_rows;
    result.test_origin_index = split.test.origin_index;
    result.test_targets = split.test.targets;

    double best_f1 = -1.0;
    for (ModelKind kind : spec.models) {
        const std::string name = model_kind_name(kind);
        if (result.reports.count(name)) continue;  // duplicate entry in the list

        std::vector<int> preds;
        nlohmann::json model_json;
        if (kind == ModelKind::Logistic) {
            LogisticConfig cfg = spec.logistic;
            cfg.seed = derive_seed(spec.seed, 101);
            LogisticModel model = train_logistic(train_x, split.train.targets, cfg);
            preds = predict(model, test_x);
            model_json = model;
        } else {
            MlpConfig cfg = spec.mlp;
            cfg.seed = derive_seed(spec.seed, 102);
            MlpModel model = train_mlp(train_x, split.train.targets, cfg);
            preds = predict(model, test_x);
            model_json = model;
        }

        ClassificationReport report = classification_report(split.test.targets, preds);
        std::size_t positives = 0;
        for (int p : preds) positives += static_cast<std::size_t>(p);
        double frac = static_cast<double>(positives) / static_cast<double>(preds.size());

        if (report.c1.f1 > best_f1) {
            best_f1 = report.c1.f1;
            result.best_model = name;
            result.predicted_theta = frac;
        }
        result.reports.emplace(name, report);
        result.positive_fraction.emplace(name, frac);
        result.predictions.emplace(name, std::move(preds));
        result.models_json.emplace(name, std::move(model_json));
    }
    return result;
}

std::vector<HedgeComparisonRow> compare_hedging(
    const ModelParams& params_base, const SubordinatorSpec& z, const SubordinatorSpec& zb,
    const StableAssetParams& stable, const EuropeanOption& option,
    const VarSwapContract& contract, const std::vector<double>& theta_candidates,
    std::size_t n_steps, std::size_t n_paths, std::uint64_t seed, int n_threads) {
    if (theta_candidates.empty())
        throw ValidationError("compare_hedging: no theta candidates");
    for (double th : theta_candidates)
        if (!(th >= 0.0 && th <= 1.0))
            throw ValidationError("compare_hedging: theta candidates must lie in [0, 1]");

    std::vector<HedgeComparisonRow> rows;
    rows.reserve(theta_candidates.size());
    for (double th : theta_candidates) {
        HedgingErrorStats stats =
            simulate_hedge(params_base, z, zb, stable, option, contract, n_steps, n_paths,
                           seed, HedgeStrategy::optimal_as_if_theta(th), n_threads);
        rows.push_back(HedgeComparisonRow{th, stats.mean, stats.variance, stats.std_error});
    }
    return rows;
}

} // namespace bns
