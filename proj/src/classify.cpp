#include "bns/classify.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "bns/errors.hpp"
#include "bns/rng.hpp"

namespace bns {

namespace {

void check_xy(const FeatureMatrix& x, const std::vector<int>& y) {
    if (x.empty()) throw ShapeMismatch("training data: empty feature matrix");
    if (x.size() != y.size())
        throw ShapeMismatch("training data: feature rows and targets differ in length");
    const std::size_t w = x.front().size();
    if (w == 0) throw ShapeMismatch("training data: zero-width feature rows");
    for (const auto& row : x)
        if (row.size() != w) throw ShapeMismatch("training data: ragged feature rows");
    for (int t : y)
        if (t != 0 && t != 1) throw ShapeMismatch("training data: targets must be 0 or 1");
}

void check_width(std::size_t expected, const FeatureMatrix& x) {
    for (const auto& row : x)
        if (row.size() != expected)
            throw ShapeMismatch("predict: feature width does not match the model");
}

// log(1 + e^z) without overflow
double softplus(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

} // namespace

Standardizer Standardizer::fit(const FeatureMatrix& x) {
    if (x.empty()) throw ShapeMismatch("Standardizer: empty feature matrix");
    const std::size_t w = x.front().size();
    Standardizer s;
    s.mean.assign(w, 0.0);
    s.stddev.assign(w, 1.0);
    for (const auto& row : x) {
        if (row.size() != w) throw ShapeMismatch("Standardizer: ragged feature rows");
        for (std::size_t j = 0; j < w; ++j) s.mean[j] += row[j];
    }
    for (std::size_t j = 0; j < w; ++j) s.mean[j] /= static_cast<double>(x.size());
    if (x.size() > 1) {
        std::vector<double> ss(w, 0.0);
        for (const auto& row : x)
            for (std::size_t j = 0; j < w; ++j) {
                double d = row[j] - s.mean[j];
                ss[j] += d * d;
            }
        for (std::size_t j = 0; j < w; ++j) {
            double var = ss[j] / static_cast<double>(x.size() - 1);
            if (var > 0.0) s.stddev[j] = std::sqrt(var);
        }
    }
    return s;
}

FeatureMatrix Standardizer::transform(const FeatureMatrix& x) const {
    FeatureMatrix out;
    out.reserve(x.size());
    for (const auto& row : x) {
        if (row.size() != mean.size())
            throw ShapeMismatch("Standardizer: feature width does not match the fit");
        std::vector<double> r(row.size());
        for (std::size_t j = 0; j < row.size(); ++j) r[j] = (row[j] - mean[j]) / stddev[j];
        out.push_back(std::move(r));
    }
    return out;
}

double LogisticModel::probability(const std::vector<double>& x) const {
    if (x.size() != weights.size())
        throw ShapeMismatch("LogisticModel: feature width does not match the model");
    double z = bias;
    for (std::size_t j = 0; j < x.size(); ++j) z += weights[j] * x[j];
    return 1.0 / (1.0 + std::exp(-z));
}

double logistic_loss(const LogisticModel& model, const FeatureMatrix& x,
                     const std::vector<int>& y, double l2) {
    check_xy(x, y);
    double loss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double z = model.bias;
        for (std::size_t j = 0; j < x[i].size(); ++j) z += model.weights[j] * x[i][j];
        loss += softplus(z) - static_cast<double>(y[i]) * z;
    }
    loss /= static_cast<double>(x.size());
    double reg = 0.0;
    for (double w : model.weights) reg += w * w;
    return loss + 0.5 * l2 * reg;
}

void logistic_gradient(const LogisticModel& model, const FeatureMatrix& x,
                       const std::vector<int>& y, double l2, std::vector<double>& grad_w,
                       double& grad_b) {
    check_xy(x, y);
    const std::size_t w = x.front().size();
    grad_w.assign(w, 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double resid = model.probability(x[i]) - static_cast<double>(y[i]);
        for (std::size_t j = 0; j < w; ++j) grad_w[j] += resid * x[i][j];
        grad_b += resid;
    }
    const double inv_n = 1.0 / static_cast<double>(x.size());
    for (std::size_t j = 0; j < w; ++j) grad_w[j] = grad_w[j] * inv_n + l2 * model.weights[j];
    grad_b *= inv_n;
}

LogisticModel train_logistic(const FeatureMatrix& x, const std::vector<int>& y,
                             const LogisticConfig& config) {
    check_xy(x, y);
    LogisticModel model;
    model.weights.assign(x.front().size(), 0.0);
    model.bias = 0.0;

    double lr = config.lr;
    double loss_prev = logistic_loss(model, x, y, config.l2);
    std::vector<double> gw;
    double gb = 0.0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        logistic_gradient(model, x, y, config.l2, gw, gb);
        LogisticModel trial = model;
        double trial_loss;
        for (;;) {
            for (std::size_t j = 0; j < gw.size(); ++j)
                trial.weights[j] = model.weights[j] - lr * gw[j];
            trial.bias = model.bias - lr * gb;
            trial_loss = logistic_loss(trial, x, y, config.l2);
            if (trial_loss <= loss_prev || lr < 1e-14) break;
            lr *= 0.5;  // backtrack; keeps the loss monotone
        }
        if (trial_loss > loss_prev) break;
        model = trial;
        loss_prev = trial_loss;
    }
    return model;
}

MlpModel init_mlp(std::size_t n_features, const MlpConfig& config) {
    if (n_features == 0) throw ShapeMismatch("init_mlp: zero-width features");
    if (config.widths.size() != 3)
        throw ValidationError("MlpConfig: exactly three hidden-layer widths required");
    for (std::size_t w : config.widths)
        if (w == 0) throw ValidationError("MlpConfig: hidden-layer widths must be > 0");

    const Activation acts[3] = {Activation::Tanh, Activation::Tanh, Activation::Relu};
    MlpModel model;
    Rng rng(config.seed);
    std::size_t in = n_features;
    for (std::size_t l = 0; l < 4; ++l) {
        MlpLayer layer;
        layer.in = in;
        layer.out = l < 3 ? config.widths[l] : 2;
        layer.activation = l < 3 ? acts[l] : Activation::Identity;
        double scale = 1.0 / std::sqrt(static_cast<double>(in));
        std::uniform_real_distribution<double> dist(-scale, scale);
        layer.w.resize(layer.out * layer.in);
        for (double& v : layer.w) v = dist(rng);
        layer.b.assign(layer.out, 0.0);
        in = layer.out;
        model.layers.push_back(std::move(layer));
    }
    return model;
}

namespace {

double activate(Activation a, double z) {
    switch (a) {
        case Activation::Tanh: return std::tanh(z);
        case Activation::Relu: return z > 0.0 ? z : 0.0;
        case Activation::Identity: return z;
    }
    return z;
}

double activate_deriv(Activation a, double z) {
    switch (a) {
        case Activation::Tanh: {
            double t = std::tanh(z);
            return 1.0 - t * t;
        }
        case Activation::Relu: return z > 0.0 ? 1.0 : 0.0;
        case Activation::Identity: return 1.0;
    }
    return 1.0;
}

struct ForwardPass {
    std::vector<std::vector<double>> pre;   // pre-activation per layer
    std::vector<std::vector<double>> post;  // activation per layer (post[0] = input)
};

ForwardPass forward(const MlpModel& model, const std::vector<double>& x) {
    ForwardPass fp;
    fp.post.push_back(x);
    std::vector<double> cur = x;
    for (const MlpLayer& layer : model.layers) {
        std::vector<double> z(layer.out);
        for (std::size_t o = 0; o < layer.out; ++o) {
            double acc = layer.b[o];
            const double* wrow = &layer.w[o * layer.in];
            for (std::size_t j = 0; j < layer.in; ++j) acc += wrow[j] * cur[j];
            z[o] = acc;
        }
        fp.pre.push_back(z);
        for (std::size_t o = 0; o < layer.out; ++o) z[o] = activate(layer.activation, z[o]);
        fp.post.push_back(z);
        cur = fp.post.back();
    }
    return fp;
}

} // namespace

std::array<double, 2> MlpModel::logits(const std::vector<double>& x) const {
    if (layers.empty() || x.size() != layers.front().in)
        throw ShapeMismatch("MlpModel: feature width does not match the model");
    ForwardPass fp = forward(*this, x);
    return {fp.post.back()[0], fp.post.back()[1]};
}

double MlpModel::probability(const std::vector<double>& x) const {
    std::array<double, 2> l = logits(x);
    double m = l[0] > l[1] ? l[0] : l[1];
    double e0 = std::exp(l[0] - m);
    double e1 = std::exp(l[1] - m);
    return e1 / (e0 + e1);
}

double mlp_loss(const MlpModel& model, const FeatureMatrix& x, const std::vector<int>& y) {
    check_xy(x, y);
    check_width(model.layers.front().in, x);
    double loss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::array<double, 2> l = model.logits(x[i]);
        double m = l[0] > l[1] ? l[0] : l[1];
        double lse = m + std::log(std::exp(l[0] - m) + std::exp(l[1] - m));
        loss += lse - l[y[i]];
    }
    return loss / static_cast<double>(x.size());
}

MlpGradients mlp_gradient(const MlpModel& model, const FeatureMatrix& x,
                          const std::vector<int>& y) {
    check_xy(x, y);
    check_width(model.layers.front().in, x);

    MlpGradients g;
    for (const MlpLayer& layer : model.layers) {
        g.w.emplace_back(layer.w.size(), 0.0);
        g.b.emplace_back(layer.b.size(), 0.0);
    }

    const double inv_n = 1.0 / static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        ForwardPass fp = forward(model, x[i]);
        const std::vector<double>& out = fp.post.back();
        double m = out[0] > out[1] ? out[0] : out[1];
        double e0 = std::exp(out[0] - m);
        double e1 = std::exp(out[1] - m);
        double denom = e0 + e1;

        // dz at the softmax head
        std::vector<double> dz = {e0 / denom, e1 / denom};
        dz[static_cast<std::size_t>(y[i])] -= 1.0;
        dz[0] *= inv_n;
        dz[1] *= inv_n;

        for (std::size_t l = model.layers.size(); l-- > 0;) {
            const MlpLayer& layer = model.layers[l];
            const std::vector<double>& input = fp.post[l];
            for (std::size_t o = 0; o < layer.out; ++o) {
                g.b[l][o] += dz[o];
                double* grow = &g.w[l][o * layer.in];
                for (std::size_t j = 0; j < layer.in; ++j) grow[j] += dz[o] * input[j];
            }
            if (l == 0) break;
            std::vector<double> da(layer.in, 0.0);
            for (std::size_t o = 0; o < layer.out; ++o) {
                const double* wrow = &layer.w[o * layer.in];
                for (std::size_t j = 0; j < layer.in; ++j) da[j] += wrow[j] * dz[o];
            }
            const MlpLayer& prev = model.layers[l - 1];
            dz.assign(prev.out, 0.0);
            for (std::size_t o = 0; o < prev.out; ++o)
                dz[o] = da[o] * activate_deriv(prev.activation, fp.pre[l - 1][o]);
        }
    }
    return g;
}

MlpModel train_mlp(const FeatureMatrix& x, const std::vector<int>& y, const MlpConfig& config) {
    check_xy(x, y);
    MlpModel model = init_mlp(x.front().size(), config);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        MlpGradients g = mlp_gradient(model, x, y);
        for (std::size_t l = 0; l < model.layers.size(); ++l) {
            MlpLayer& layer = model.layers[l];
            for (std::size_t k = 0; k < layer.w.size(); ++k) layer.w[k] -= config.lr * g.w[l][k];
            for (std::size_t k = 0; k < layer.b.size(); ++k) layer.b[k] -= config.lr * g.b[l][k];
        }
    }
    return model;
}

namespace {

template <typename Model>
std::vector<int> predict_impl(const Model& model, const FeatureMatrix& x, double threshold) {
    std::vector<int> out;
    out.reserve(x.size());
    for (const auto& row : x) out.push_back(model.probability(row) > threshold ? 1 : 0);
    return out;
}

} // namespace

std::vector<int> predict(const LogisticModel& model, const FeatureMatrix& x, double threshold) {
    return predict_impl(model, x, threshold);
}

std::vector<int> predict(const MlpModel& model, const FeatureMatrix& x, double threshold) {
    return predict_impl(model, x, threshold);
}

ClassificationReport classification_report(const std::vector<int>& y_true,
                                           const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size())
        throw LengthMismatch("classification_report: prediction and truth lengths differ");
    for (std::size_t i = 0; i < y_true.size(); ++i)
        if ((y_true[i] != 0 && y_true[i] != 1) || (y_pred[i] != 0 && y_pred[i] != 1))
            throw ValidationError("classification_report: labels must be 0 or 1");

    ClassificationReport rep;
    for (std::size_t i = 0; i < y_true.size(); ++i)
        rep.confusion[static_cast<std::size_t>(y_true[i])][static_cast<std::size_t>(y_pred[i])]++;

    auto fill = [&](int cls) {
        ClassificationReport::PerClass pc;
        std::size_t c = static_cast<std::size_t>(cls);
        std::size_t tp = rep.confusion[c][c];
        std::size_t fp = rep.confusion[1 - c][c];
        std::size_t fn = rep.confusion[c][1 - c];
        pc.support = tp + fn;
        pc.precision = (tp + fp) == 0 ? 0.0
                                      : static_cast<double>(tp) / static_cast<double>(tp + fp);
        pc.recall = pc.support == 0 ? 0.0
                                    : static_cast<double>(tp) / static_cast<double>(pc.support);
        pc.f1 = (pc.precision + pc.recall) == 0.0
                    ? 0.0
                    : 2.0 * pc.precision * pc.recall / (pc.precision + pc.recall);
        return pc;
    };
    rep.c0 = fill(0);
    rep.c1 = fill(1);
    return rep;
}

void write_reports_csv(const std::map<std::string, ClassificationReport>& reports,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("write_reports_csv: cannot open '" + path + "' for writing");
    out << "statistic";
    for (const auto& [name, rep] : reports) out << ',' << name;
    out << '\n';

    auto stat_row = [&](const std::string& label, auto getter) {
        out << label;
        char buf[40];
        for (const auto& [name, rep] : reports) {
            std::snprintf(buf, sizeof(buf), "%.6g", getter(rep));
            out << ',' << buf;
        }
        out << '\n';
    };
    stat_row("precision_theta0", [](const ClassificationReport& r) { return r.c0.precision; });
    stat_row("recall_theta0", [](const ClassificationReport& r) { return r.c0.recall; });
    stat_row("f1_theta0", [](const ClassificationReport& r) { return r.c0.f1; });
    stat_row("support_theta0",
             [](const ClassificationReport& r) { return static_cast<double>(r.c0.support); });
    stat_row("precision_theta1", [](const ClassificationReport& r) { return r.c1.precision; });
    stat_row("recall_theta1", [](const ClassificationReport& r) { return r.c1.recall; });
    stat_row("f1_theta1", [](const ClassificationReport& r) { return r.c1.f1; });
    stat_row("support_theta1",
             [](const ClassificationReport& r) { return static_cast<double>(r.c1.support); });
}

void to_json(nlohmann::json& j, const ClassificationReport& report) {
    auto cls = [](const ClassificationReport::PerClass& pc) {
        return nlohmann::json{{"precision", pc.precision},
                              {"recall", pc.recall},
                              {"f1", pc.f1},
                              {"support", pc.support}};
    };
    j = nlohmann::json{{"theta0", cls(report.c0)},
                       {"theta1", cls(report.c1)},
                       {"confusion", {{report.confusion[0][0], report.confusion[0][1]},
                                      {report.confusion[1][0], report.confusion[1][1]}}}};
}

void to_json(nlohmann::json& j, const LogisticModel& model) {
    j = nlohmann::json{{"type", "logistic"}, {"weights", model.weights}, {"bias", model.bias}};
}

void from_json(const nlohmann::json& j, LogisticModel& model) {
    if (j.value("type", "") != std::string("logistic"))
        throw ValidationError("LogisticModel: JSON type must be 'logistic'");
    model.weights = j.at("weights").get<std::vector<double>>();
    model.bias = j.at("bias").get<double>();
}

namespace {

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
        case Activation::Identity: return "identity";
    }
    return "identity";
}

Activation activation_from_name(const std::string& s) {
    if (s == "tanh") return Activation::Tanh;
    if (s == "relu") return Activation::Relu;
    if (s == "identity") return Activation::Identity;
    throw ValidationError("MlpModel: unknown activation '" + s + "'");
}

} // namespace

void to_json(nlohmann::json& j, const MlpModel& model) {
    nlohmann::json layers = nlohmann::json::array();
    for (const MlpLayer& layer : model.layers) {
        layers.push_back(nlohmann::json{{"in", layer.in},
                                        {"out", layer.out},
                                        {"w", layer.w},
                                        {"b", layer.b},
                                        {"activation", activation_name(layer.activation)}});
    }
    j = nlohmann::json{{"type", "mlp"}, {"layers", layers}};
}

void from_json(const nlohmann::json& j, MlpModel& model) {
    if (j.value("type", "") != std::string("mlp"))
        throw ValidationError("MlpModel: JSON type must be 'mlp'");
    model.layers.clear();
    for (const auto& jl : j.at("layers")) {
        MlpLayer layer;
        layer.in = jl.at("in").get<std::size_t>();
        layer.out = jl.at("out").get<std::size_t>();
        layer.w = jl.at("w").get<std::vector<double>>();
        layer.b = jl.at("b").get<std::vector<double>>();
        layer.activation = activation_from_name(jl.at("activation").get<std::string>());
        if (layer.w.size() != layer.in * layer.out || layer.b.size() != layer.out)
            throw ValidationError("MlpModel: inconsistent layer shapes in JSON");
        model.layers.push_back(std::move(layer));
    }
    if (model.layers.empty()) throw ValidationError("MlpModel: no layers in JSON");
}

} // namespace bns
