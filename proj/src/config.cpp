#include "bns/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "bns/errors.hpp"

namespace bns {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
    if (!j.is_object()) throw ValidationError(ctx + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known) throw ValidationError(ctx + ": unknown key '" + it.key() + "'");
    }
}

template <typename T>
void read_field(const json& j, const char* key, T& out, const std::string& ctx) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(ctx + "." + key + ": " + e.what());
    }
}

void read_name(const json& j, const char* key, const std::string& ctx,
               const std::function<void(const std::string&)>& apply) {
    if (!j.contains(key)) return;
    std::string name;
    read_field(j, key, name, ctx);
    apply(name);
}

void parse_model(const json& j, ModelParams& m) {
    check_keys(j, {"s0", "sigma0_sq", "rho", "lambda", "theta", "r", "horizon", "drift_mode"},
               "model");
    read_field(j, "s0", m.s0, "model");
    read_field(j, "sigma0_sq", m.sigma0_sq, "model");
    read_field(j, "rho", m.rho, "model");
    read_field(j, "lambda", m.lambda, "model");
    read_field(j, "theta", m.theta, "model");
    read_field(j, "r", m.r, "model");
    read_field(j, "horizon", m.horizon, "model");
    read_name(j, "drift_mode", "model",
              [&](const std::string& s) { m.drift_mode = drift_mode_from_name(s); });
}

void parse_stable(const json& j, StableAssetParams& p) {
    check_keys(j, {"y0", "sigma", "rho_prime"}, "stable_asset");
    read_field(j, "y0", p.y0, "stable_asset");
    read_field(j, "sigma", p.sigma, "stable_asset");
    read_field(j, "rho_prime", p.rho_prime, "stable_asset");
}

void parse_option(const json& j, EuropeanOption& o) {
    check_keys(j, {"strike", "expiry", "kind"}, "option");
    read_field(j, "strike", o.strike, "option");
    read_field(j, "expiry", o.expiry, "option");
    read_name(j, "kind", "option", [&](const std::string& s) {
        if (s == "call")
            o.kind = OptionKind::Call;
        else if (s == "put")
            o.kind = OptionKind::Put;
        else
            throw ValidationError("option.kind: expected 'call' or 'put', got '" + s + "'");
    });
}

void parse_contract(const json& j, VarSwapContract& c) {
    check_keys(j, {"strike", "notional"}, "contract");
    read_field(j, "strike", c.strike, "contract");
    read_field(j, "notional", c.notional, "contract");
}

void parse_simulate(const json& j, SimulateConfig& s) {
    check_keys(j, {"n_paths", "n_steps", "write_paths"}, "simulate");
    read_field(j, "n_paths", s.n_paths, "simulate");
    read_field(j, "n_steps", s.n_steps, "simulate");
    read_field(j, "write_paths", s.write_paths, "simulate");
}

void parse_price(const json& j, PriceConfig& p) {
    check_keys(j, {"t", "sigma_sq_t", "v_t", "mc_check", "mc_paths", "mc_steps"}, "price");
    read_field(j, "t", p.t, "price");
    if (j.contains("sigma_sq_t")) {
        double v = 0.0;
        read_field(j, "sigma_sq_t", v, "price");
        p.sigma_sq_t = v;
    }
    read_field(j, "v_t", p.v_t, "price");
    read_field(j, "mc_check", p.mc_check, "price");
    read_field(j, "mc_paths", p.mc_paths, "price");
    read_field(j, "mc_steps", p.mc_steps, "price");
}

void parse_hedge(const json& j, HedgeConfig& h) {
    check_keys(j, {"n_paths", "n_steps", "factors", "theta_candidates"}, "hedge");
    read_field(j, "n_paths", h.n_paths, "hedge");
    read_field(j, "n_steps", h.n_steps, "hedge");
    read_field(j, "factors", h.factors, "hedge");
    read_field(j, "theta_candidates", h.theta_candidates, "hedge");
}

void parse_features(const json& j, FeaturesConfig& f) {
    check_keys(j, {"approach", "window", "crash_quantile", "min_duration", "min_count"},
               "features");
    read_name(j, "approach", "features",
              [&](const std::string& s) { f.approach = approach_from_name(s); });
    read_field(j, "window", f.window, "features");
    read_field(j, "crash_quantile", f.crash_quantile, "features");
    read_field(j, "min_duration", f.min_duration, "features");
    read_field(j, "min_count", f.min_count, "features");
}

void parse_logistic(const json& j, LogisticConfig& c) {
    check_keys(j, {"lr", "epochs", "l2"}, "experiment.logistic");
    read_field(j, "lr", c.lr, "experiment.logistic");
    read_field(j, "epochs", c.epochs, "experiment.logistic");
    read_field(j, "l2", c.l2, "experiment.logistic");
}

void parse_mlp(const json& j, MlpConfig& c) {
    check_keys(j, {"lr", "epochs", "widths"}, "experiment.mlp");
    read_field(j, "lr", c.lr, "experiment.mlp");
    read_field(j, "epochs", c.epochs, "experiment.mlp");
    read_field(j, "widths", c.widths, "experiment.mlp");
}

void parse_experiment(const json& j, ExperimentConfig& e) {
    check_keys(j,
               {"train_lo", "train_hi", "test_lo", "test_hi", "models", "standardize",
                "leakage", "logistic", "mlp", "synth_days"},
               "experiment");
    read_field(j, "train_lo", e.train_range.lo, "experiment");
    read_field(j, "train_hi", e.train_range.hi, "experiment");
    read_field(j, "test_lo", e.test_range.lo, "experiment");
    read_field(j, "test_hi", e.test_range.hi, "experiment");
    if (j.contains("models")) {
        std::vector<std::string> names;
        read_field(j, "models", names, "experiment");
        e.models.clear();
        for (const auto& n : names) e.models.push_back(model_kind_from_name(n));
    }
    read_field(j, "standardize", e.standardize, "experiment");
    read_name(j, "leakage", "experiment",
              [&](const std::string& s) { e.leakage = leakage_policy_from_name(s); });
    if (j.contains("logistic")) parse_logistic(j.at("logistic"), e.logistic);
    if (j.contains("mlp")) parse_mlp(j.at("mlp"), e.mlp);
    read_field(j, "synth_days", e.synth_days, "experiment");
}

} // namespace

std::string leakage_policy_name(LeakagePolicy policy) {
    switch (policy) {
        case LeakagePolicy::Prune: return "prune";
        case LeakagePolicy::Error: return "error";
        case LeakagePolicy::Allow: return "allow";
    }
    return "prune";
}

LeakagePolicy leakage_policy_from_name(const std::string& name) {
    if (name == "prune") return LeakagePolicy::Prune;
    if (name == "error") return LeakagePolicy::Error;
    if (name == "allow") return LeakagePolicy::Allow;
    throw ValidationError("leakage policy must be 'prune', 'error' or 'allow', got '" + name +
                          "'");
}

ExperimentSpec Config::experiment_spec() const {
    ExperimentSpec s;
    s.approach = features.approach;
    s.window = features.window;
    s.crash_quantile = features.crash_quantile;
    s.min_duration = features.min_duration;
    s.min_count = features.min_count;
    s.train_range = experiment.train_range;
    s.test_range = experiment.test_range;
    s.models = experiment.models;
    s.standardize = experiment.standardize;
    s.leakage = experiment.leakage;
    s.logistic = experiment.logistic;
    s.mlp = experiment.mlp;
    s.seed = seed;
    return s;
}

Config config_from_json(const json& j) {
    Config cfg;
    check_keys(j,
               {"seed", "output_dir", "model", "subordinator_z", "subordinator_zb",
                "stable_asset", "option", "contract", "simulate", "price", "hedge", "features",
                "experiment"},
               "config");
    if (j.contains("seed")) {
        read_field(j, "seed", cfg.seed, "config");
        cfg.seed_present = true;
    }
    read_field(j, "output_dir", cfg.output_dir, "config");
    if (j.contains("model")) parse_model(j.at("model"), cfg.model);
    try {
        if (j.contains("subordinator_z")) cfg.z = j.at("subordinator_z").get<SubordinatorSpec>();
        if (j.contains("subordinator_zb"))
            cfg.zb = j.at("subordinator_zb").get<SubordinatorSpec>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("subordinator: ") + e.what());
    }
    if (j.contains("stable_asset")) parse_stable(j.at("stable_asset"), cfg.stable);
    if (j.contains("option")) parse_option(j.at("option"), cfg.option);
    if (j.contains("contract")) parse_contract(j.at("contract"), cfg.contract);
    if (j.contains("simulate")) parse_simulate(j.at("simulate"), cfg.simulate);
    if (j.contains("price")) parse_price(j.at("price"), cfg.price);
    if (j.contains("hedge")) parse_hedge(j.at("hedge"), cfg.hedge);
    if (j.contains("features")) parse_features(j.at("features"), cfg.features);
    if (j.contains("experiment")) parse_experiment(j.at("experiment"), cfg.experiment);
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError("config file " + path + ": " + e.what());
    }
    return config_from_json(j);
}

void apply_override(json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ParseError("--set expects key.path=value, got '" + assignment + "'");
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    json* node = &j;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (key.empty()) throw ParseError("--set: empty path segment in '" + path + "'");
        if (dot == std::string::npos) {
            json value = json::parse(raw, nullptr, false);
            if (value.is_discarded()) value = raw;  // not valid JSON: keep as string
            (*node)[key] = std::move(value);
            return;
        }
        if (!node->contains(key) || !(*node)[key].is_object()) (*node)[key] = json::object();
        node = &(*node)[key];
        start = dot + 1;
    }
}

} // namespace bns
