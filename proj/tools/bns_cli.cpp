#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bns/config.hpp"
#include "bns/errors.hpp"
#include "bns/parallel.hpp"
#include "bns/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bns;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
}

void write_json(const fs::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

struct CliOptions {
    std::string config_path;
    std::string output;
    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = default_thread_count();
};

Config build_config(const CliOptions& opts) {
    json j = json::object();
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) throw ParseError("cannot open config file: " + opts.config_path);
        try {
            in >> j;
        } catch (const json::parse_error& e) {
            throw ParseError("config file " + opts.config_path + ": " + e.what());
        }
    }
    for (const auto& s : opts.sets) apply_override(j, s);
    return config_from_json(j);
}

std::uint64_t resolve_seed(const Config& cfg, const CliOptions& opts) {
    std::uint64_t seed = 42;
    if (const char* env = std::getenv("BNS_SEED")) {
        std::string s(env);
        char* end = nullptr;
        errno = 0;
        unsigned long long v = std::strtoull(s.c_str(), &end, 10);
        if (s.empty() || end == nullptr || *end != '\0' || errno != 0)
            throw ParseError("BNS_SEED: not an unsigned integer: '" + s + "'");
        seed = static_cast<std::uint64_t>(v);
    }
    if (cfg.seed_present) seed = cfg.seed;
    if (opts.seed_given) seed = opts.seed;
    return seed;
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

// ---------------------------------------------------------------- simulate

void cmd_simulate(const Config& cfg, std::uint64_t seed, const fs::path& outdir, int threads) {
    cfg.model.validate();
    cfg.z.validate();
    cfg.zb.validate();
    if (cfg.simulate.n_paths == 0) throw ValidationError("simulate.n_paths: must be >= 1");
    if (cfg.simulate.n_steps == 0) throw ValidationError("simulate.n_steps: must be >= 1");
    if (auto warn = intensity_ordering_warning(cfg.z, cfg.zb))
        std::fprintf(stderr, "warning: %s\n", warn->c_str());

    const std::size_t n = cfg.simulate.n_paths;
    const std::size_t m = cfg.simulate.n_steps;
    const std::size_t kept = std::min(cfg.simulate.write_paths, n);

    std::vector<double> x_t(n), rv(n), sig_t(n);
    std::vector<Path> kept_paths(kept);
    parallel_for(n, threads, [&](std::size_t i) {
        Path p = simulate_path(cfg.model, cfg.z, cfg.zb, m, path_stream_seeds(seed, i));
        x_t[i] = p.x.back();
        rv[i] = realized_variance(p, cfg.model, cfg.z, cfg.zb);
        sig_t[i] = p.sigma_sq.back();
        if (i < kept) kept_paths[i] = std::move(p);
    });

    for (std::size_t k = 0; k < kept; ++k) {
        const Path& p = kept_paths[k];
        std::string csv = "t,s,x,sigma_sq,v\n";
        for (std::size_t i = 0; i < p.times.size(); ++i)
            csv += csv_line({fmt(p.times[i]), fmt(p.s[i]), fmt(p.x[i]), fmt(p.sigma_sq[i]),
                             fmt(p.v[i])});
        write_text(outdir / ("path_" + std::to_string(k) + ".csv"), csv);
    }

    RunningStats sx = accumulate(x_t);
    RunningStats srv = accumulate(rv);
    RunningStats ssig = accumulate(sig_t);
    RunningStats sdisc;
    for (double x : x_t)
        sdisc.add(std::exp(-cfg.model.r * cfg.model.horizon) * cfg.model.s0 * std::exp(x));

    const double mixed_k1 = (1.0 - cfg.model.theta) * cumulants(cfg.z).k1 +
                            cfg.model.theta * cumulants(cfg.zb).k1;
    const double decay = std::exp(-cfg.model.lambda * cfg.model.horizon);
    json out{
        {"n_paths", n},
        {"n_steps", m},
        {"seed", seed},
        {"theta", cfg.model.theta},
        {"drift_mode", drift_mode_name(cfg.model.drift_mode)},
        {"terminal_log_return", {{"mean", sx.mean()}, {"stddev", sx.stddev()}}},
        {"discounted_terminal_price",
         {{"mean", sdisc.mean()}, {"std_error", sdisc.std_error()}, {"s0", cfg.model.s0}}},
        {"realized_variance",
         {{"mean", srv.mean()}, {"stddev", srv.stddev()}, {"std_error", srv.std_error()}}},
        {"terminal_variance",
         {{"mean", ssig.mean()},
          {"exact_expectation", decay * cfg.model.sigma0_sq + mixed_k1 * (1.0 - decay)}}},
    };
    write_json(outdir / "ensemble.json", out);
}

// ---------------------------------------------------------------- price

void cmd_price(const Config& cfg, std::uint64_t seed, const fs::path& outdir, int threads) {
    cfg.model.validate();
    cfg.z.validate();
    cfg.zb.validate();
    cfg.contract.validate();

    const double t = cfg.price.t;
    const double sig = cfg.price.sigma_sq_t.value_or(cfg.model.sigma0_sq);
    const double v = cfg.price.v_t;

    const double erv = conditional_expected_rv(cfg.model, cfg.z, cfg.zb, t, sig, v);
    const double p = price(cfg.model, cfg.z, cfg.zb, cfg.contract, t, sig, v);
    const double k0 = fair_strike(cfg.model, cfg.z, cfg.zb);

    json out{
        {"t", t},
        {"sigma_sq_t", sig},
        {"v_t", v},
        {"expected_rv", erv},
        {"price", p},
        {"fair_strike", k0},
        {"strike", cfg.contract.strike},
        {"notional", cfg.contract.notional},
    };

    if (cfg.price.mc_check) {
        const std::size_t n = cfg.price.mc_paths;
        const std::size_t m = cfg.price.mc_steps;
        if (n < 2) throw ValidationError("price.mc_paths: must be >= 2");
        if (m == 0) throw ValidationError("price.mc_steps: must be >= 1");
        std::vector<double> rvs(n);
        parallel_for(n, threads, [&](std::size_t i) {
            ModelState st{t, 0.0, sig, v};
            Path path = simulate_path_from(cfg.model, cfg.z, cfg.zb, st, m,
                                           path_stream_seeds(seed, i));
            rvs[i] = realized_variance(path, cfg.model, cfg.z, cfg.zb);
        });
        RunningStats s = accumulate(rvs);
        const double df = std::exp(-cfg.model.r * (cfg.model.horizon - t));
        out["mc"] = json{
            {"expected_rv", s.mean()},
            {"expected_rv_std_error", s.std_error()},
            {"price", df * (s.mean() - cfg.contract.strike) * cfg.contract.notional},
            {"price_std_error", df * cfg.contract.notional * s.std_error()},
            {"n_paths", n},
            {"n_steps", m},
            {"seed", seed},
        };
    }
    write_json(outdir / "price.json", out);
}

// ---------------------------------------------------------------- hedge

void cmd_hedge(const Config& cfg, std::uint64_t seed, const fs::path& outdir, int threads) {
    cfg.model.validate();
    cfg.z.validate();
    cfg.zb.validate();
    cfg.stable.validate();
    cfg.option.validate();
    cfg.contract.validate();
    if (cfg.hedge.n_paths < 2) throw ValidationError("hedge.n_paths: must be >= 2");
    if (cfg.hedge.n_steps == 0) throw ValidationError("hedge.n_steps: must be >= 1");

    std::map<std::string, HedgeStrategy> strategies;
    strategies["optimal"] = HedgeStrategy::optimal();
    strategies["zero"] = HedgeStrategy::zero();
    for (double f : cfg.hedge.factors) strategies["perturbed_" + fmt(f)] = HedgeStrategy::perturbed(f);

    json jstrat = json::object();
    for (const auto& [name, strat] : strategies) {
        HedgingErrorStats s = simulate_hedge(cfg.model, cfg.z, cfg.zb, cfg.stable, cfg.option,
                                             cfg.contract, cfg.hedge.n_steps, cfg.hedge.n_paths,
                                             seed, strat, threads);
        jstrat[name] = json{{"mean", s.mean}, {"variance", s.variance},
                            {"std_error", s.std_error}};
    }

    json out{
        {"seed", seed},
        {"n_paths", cfg.hedge.n_paths},
        {"n_steps", cfg.hedge.n_steps},
        {"initial_capital",
         initial_capital(cfg.model, cfg.z, cfg.zb, cfg.stable, cfg.option, cfg.contract)},
        {"strategies", jstrat},
    };
    write_json(outdir / "hedge.json", out);

    if (!cfg.hedge.theta_candidates.empty()) {
        auto rows = compare_hedging(cfg.model, cfg.z, cfg.zb, cfg.stable, cfg.option,
                                    cfg.contract, cfg.hedge.theta_candidates,
                                    cfg.hedge.n_steps, cfg.hedge.n_paths, seed, threads);
        std::string csv = "theta_candidate,mean,variance,std_error\n";
        for (const auto& r : rows)
            csv += csv_line({fmt(r.theta_candidate), fmt(r.mean), fmt(r.variance),
                             fmt(r.std_error)});
        write_text(outdir / "hedge_compare.csv", csv);
    }
}

// ---------------------------------------------------------------- features

std::size_t effective_feature_window(const FeaturesConfig& f) {
    if (f.window != 0) return f.window;
    return f.approach == Approach::Volatility ? 20 : 10;
}

void cmd_features(const Config& cfg, const std::string& input, const fs::path& outdir) {
    PriceSeries series = load_csv(input);
    const std::size_t w = effective_feature_window(cfg.features);
    const std::size_t rv_window =
        cfg.features.approach == Approach::Volatility ? w : std::size_t{20};

    SummaryStats stats = summary_stats(series);
    auto drawdowns = compute_drawdowns(series);
    json summary{
        {"n_days", series.size()},
        {"first_date", series.dates.front()},
        {"last_date", series.dates.back()},
        {"approach", approach_name(cfg.features.approach)},
        {"window", w},
        {"change",
         {{"mean", stats.change.mean}, {"median", stats.change.median},
          {"max", stats.change.max}, {"min", stats.change.min}}},
        {"pct_change",
         {{"mean", stats.pct_change.mean}, {"median", stats.pct_change.median},
          {"max", stats.pct_change.max}, {"min", stats.pct_change.min}}},
        {"n_drawdowns", drawdowns.size()},
    };
    write_json(outdir / "summary.json", summary);

    std::vector<std::string> notes;

    std::string rv_csv = "index,rv\n";
    try {
        for (const auto& p : realized_volatility_series(series, rv_window))
            rv_csv += csv_line({std::to_string(p.index), fmt(p.rv)});
    } catch (const SeriesTooShort& e) {
        notes.push_back(std::string("realized volatility skipped: ") + e.what());
    }
    write_text(outdir / "rv.csv", rv_csv);

    LabeledDataset dataset;
    dataset.window_w = w;
    try {
        dataset = cfg.features.approach == Approach::Volatility
                      ? label_volatility(series, w, cfg.features.crash_quantile)
                      : label_duration(series, w, cfg.features.min_duration,
                                       cfg.features.min_count);
    } catch (const SeriesTooShort& e) {
        dataset = LabeledDataset{};
        dataset.window_w = w;
        notes.push_back(std::string("labeling skipped: ") + e.what());
    }
    write_dataset_csv(dataset, (outdir / "dataset.csv").string());

    std::string flags;
    for (const auto& n : notes) flags += n + "\n";
    for (const auto& f : dataset.quality_flags) flags += f + "\n";
    write_text(outdir / "flags.txt", flags);
}

// ---------------------------------------------------------------- train

LabeledDataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("dataset file " + path + ": missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        cols.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (cols.size() < 3 || cols.front() != "origin_index" || cols.back() != "theta")
        throw ParseError("dataset file " + path +
                         ": header must be origin_index,f1..fw,theta");
    const std::size_t w = cols.size() - 2;
    for (std::size_t i = 0; i < w; ++i)
        if (cols[i + 1] != "f" + std::to_string(i + 1))
            throw ParseError("dataset file " + path + ": feature column " +
                             std::to_string(i + 1) + " must be named f" +
                             std::to_string(i + 1));

    LabeledDataset ds;
    ds.window_w = w;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> vals;
        std::size_t pos = 0;
        while (true) {
            auto comma = line.find(',', pos);
            std::string cell =
                line.substr(pos, comma == std::string::npos ? comma : comma - pos);
            try {
                std::size_t used = 0;
                double v = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
                vals.push_back(v);
            } catch (const std::exception&) {
                throw ParseError("dataset file " + path + ", row " + std::to_string(row) +
                                 ": not a number: '" + cell + "'");
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (vals.size() != w + 2)
            throw ParseError("dataset file " + path + ", row " + std::to_string(row) +
                             ": expected " + std::to_string(w + 2) + " columns, got " +
                             std::to_string(vals.size()));
        if (vals.back() != 0.0 && vals.back() != 1.0)
            throw ValidationError("dataset file " + path + ", row " + std::to_string(row) +
                                  ": theta must be 0 or 1");
        ds.origin_index.push_back(static_cast<std::size_t>(vals.front()));
        ds.features.emplace_back(vals.begin() + 1, vals.end() - 1);
        ds.targets.push_back(static_cast<int>(vals.back()));
    }
    return ds;
}

void cmd_train(const Config& cfg, std::uint64_t seed, const std::string& input,
               const fs::path& outdir) {
    LabeledDataset ds = read_dataset_csv(input);
    if (ds.features.empty()) throw ValidationError("train: dataset has no rows");
    if (cfg.experiment.models.empty()) throw EmptyModelSet("train: experiment.models is empty");

    FeatureMatrix x = ds.features;
    if (cfg.experiment.standardize) x = Standardizer::fit(ds.features).transform(ds.features);

    std::map<std::string, ClassificationReport> reports;
    json model_names = json::array();
    for (ModelKind kind : cfg.experiment.models) {
        const std::string name = model_kind_name(kind);
        if (reports.count(name)) continue;
        std::vector<int> preds;
        json jm;
        if (kind == ModelKind::Logistic) {
            LogisticConfig lc = cfg.experiment.logistic;
            lc.seed = derive_seed(seed, 101);
            LogisticModel m = train_logistic(x, ds.targets, lc);
            preds = predict(m, x);
            jm = m;
        } else {
            MlpConfig mc = cfg.experiment.mlp;
            mc.seed = derive_seed(seed, 102);
            MlpModel m = train_mlp(x, ds.targets, mc);
            preds = predict(m, x);
            jm = m;
        }
        reports[name] = classification_report(ds.targets, preds);
        write_json(outdir / ("model_" + name + ".json"), jm);
        model_names.push_back(name);
    }
    write_reports_csv(reports, (outdir / "report.csv").string());
    json out{
        {"n_rows", ds.features.size()},
        {"window_w", ds.window_w},
        {"standardize", cfg.experiment.standardize},
        {"seed", seed},
        {"models", model_names},
    };
    write_json(outdir / "train.json", out);
}

// ---------------------------------------------------------------- experiment

void cmd_experiment(const Config& cfg, std::uint64_t seed, const std::string& input,
                    const fs::path& outdir) {
    PriceSeries series;
    if (cfg.experiment.synth_days > 0) {
        cfg.model.validate();
        cfg.z.validate();
        cfg.zb.validate();
        series = synth_series(cfg.model, cfg.z, cfg.zb, cfg.experiment.synth_days,
                              derive_seed(seed, 201));
    } else {
        if (input.empty())
            throw ValidationError(
                "experiment: --input is required when experiment.synth_days is 0");
        series = load_csv(input);
    }

    ExperimentSpec spec = cfg.experiment_spec();
    spec.seed = seed;
    ExperimentResult result = run_experiment(spec, series);

    write_reports_csv(result.reports, (outdir / "report.csv").string());
    for (const auto& [name, jm] : result.models_json)
        write_json(outdir / ("model_" + name + ".json"), jm);

    std::vector<std::string> model_names;
    for (const auto& [name, _] : result.predictions) model_names.push_back(name);

    std::vector<std::string> header{"origin_index", "target"};
    header.insert(header.end(), model_names.begin(), model_names.end());
    std::string csv = csv_line(header);
    for (std::size_t i = 0; i < result.test_origin_index.size(); ++i) {
        std::vector<std::string> cells{std::to_string(result.test_origin_index[i]),
                                       std::to_string(result.test_targets[i])};
        for (const auto& name : model_names)
            cells.push_back(std::to_string(result.predictions.at(name)[i]));
        csv += csv_line(cells);
    }
    write_text(outdir / "predictions.csv", csv);

    json pos_frac = json::object();
    for (const auto& [name, frac] : result.positive_fraction) pos_frac[name] = frac;
    json summary{
        {"approach", approach_name(spec.approach)},
        {"window", spec.effective_window()},
        {"n_days", series.size()},
        {"train_rows", result.train_rows},
        {"test_rows", result.test_rows},
        {"pruned_rows", result.pruned_rows},
        {"best_model", result.best_model},
        {"predicted_theta", result.predicted_theta},
        {"positive_fraction", pos_frac},
        {"seed", seed},
    };
    write_json(outdir / "summary.json", summary);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic volatility toolkit: simulation, variance-swap pricing, "
                 "quadratic hedging, and mixing-weight extraction from price data"};
    app.require_subcommand(1);

    CliOptions opts;
    app.add_option("--config", opts.config_path, "JSON config file");
    auto* seed_opt = app.add_option("--seed", opts.seed, "RNG seed (overrides config and BNS_SEED)");
    app.add_option("--output", opts.output, "output directory (overrides config output_dir)");
    app.add_option("--threads", opts.threads, "worker threads (default: hardware cores)");
    app.add_option("--set", opts.sets,
                   "config override as dotted.key=value, repeatable (e.g. model.theta=0.5)");

    auto* sub_simulate = app.add_subcommand("simulate", "simulate model paths to CSV");
    auto* sub_price = app.add_subcommand("price", "price a variance swap in closed form");
    auto* sub_hedge = app.add_subcommand("hedge", "run the hedging-error Monte Carlo");
    auto* sub_features = app.add_subcommand("features", "label a daily price series");
    auto* sub_train = app.add_subcommand("train", "train classifiers on a labeled dataset");
    auto* sub_experiment =
        app.add_subcommand("experiment", "full extraction pipeline: label, train, report");

    std::string in_features, in_train, in_experiment;
    sub_features->add_option("--input", in_features, "price series CSV (date,price)")->required();
    sub_train->add_option("--input", in_train, "labeled dataset CSV")->required();
    sub_experiment->add_option("--input", in_experiment,
                               "price series CSV (unused when experiment.synth_days > 0)");
    for (auto* sub : {sub_simulate, sub_price, sub_hedge, sub_features, sub_train, sub_experiment})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    opts.seed_given = seed_opt->count() > 0;

    try {
        Config cfg = build_config(opts);
        const std::uint64_t seed = resolve_seed(cfg, opts);
        const fs::path outdir = opts.output.empty() ? fs::path(cfg.output_dir)
                                                    : fs::path(opts.output);
        fs::create_directories(outdir);
        const int threads = opts.threads < 1 ? 1 : opts.threads;

        if (sub_simulate->parsed()) cmd_simulate(cfg, seed, outdir, threads);
        if (sub_price->parsed()) cmd_price(cfg, seed, outdir, threads);
        if (sub_hedge->parsed()) cmd_hedge(cfg, seed, outdir, threads);
        if (sub_features->parsed()) cmd_features(cfg, in_features, outdir);
        if (sub_train->parsed()) cmd_train(cfg, seed, in_train, outdir);
        if (sub_experiment->parsed()) cmd_experiment(cfg, seed, in_experiment, outdir);
        return 0;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
}
