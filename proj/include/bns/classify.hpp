#ifndef BNS_CLASSIFY_HPP
#define BNS_CLASSIFY_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace bns {

using FeatureMatrix = std::vector<std::vector<double>>;

// Per-column z-score fitted on the training rows and applied to both splits.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;  // zero-variance columns get stddev 1

    static Standardizer fit(const FeatureMatrix& x);
    FeatureMatrix transform(const FeatureMatrix& x) const;
};

struct LogisticConfig {
    double lr = 0.1;
    std::size_t epochs = 2000;
    double l2 = 1e-4;
    std::uint64_t seed = 0;  // unused (deterministic zero init); kept for config uniformity
};

struct LogisticModel {
    std::vector<double> weights;
    double bias = 0.0;

    double probability(const std::vector<double>& x) const;  // sigmoid, P(class 1)
};

// Full-batch gradient descent on L2-regularized cross-entropy with halving
// backtracking, so the final loss never exceeds the initial loss.
LogisticModel train_logistic(const FeatureMatrix& x, const std::vector<int>& y,
                             const LogisticConfig& config = {});

double logistic_loss(const LogisticModel& model, const FeatureMatrix& x,
                     const std::vector<int>& y, double l2);
void logistic_gradient(const LogisticModel& model, const FeatureMatrix& x,
                       const std::vector<int>& y, double l2, std::vector<double>& grad_w,
                       double& grad_b);

struct MlpConfig {
    double lr = 0.05;
    std::size_t epochs = 3000;
    std::vector<std::size_t> widths = {32, 16, 8};  // exactly three hidden layers
    std::uint64_t seed = 1;
};

enum class Activation { Tanh, Relu, Identity };

struct MlpLayer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> w;  // row-major, out x in
    std::vector<double> b;
    Activation activation = Activation::Identity;
};

// Three hidden layers (tanh, tanh, relu) and a width-2 softmax head.
struct MlpModel {
    std::vector<MlpLayer> layers;

    std::array<double, 2> logits(const std::vector<double>& x) const;
    double probability(const std::vector<double>& x) const;  // softmax P(class 1)
};

MlpModel init_mlp(std::size_t n_features, const MlpConfig& config);
MlpModel train_mlp(const FeatureMatrix& x, const std::vector<int>& y,
                   const MlpConfig& config = {});

double mlp_loss(const MlpModel& model, const FeatureMatrix& x, const std::vector<int>& y);

struct MlpGradients {
    std::vector<std::vector<double>> w;  // per layer, same flattening as MlpLayer::w
    std::vector<std::vector<double>> b;
};
MlpGradients mlp_gradient(const MlpModel& model, const FeatureMatrix& x,
                          const std::vector<int>& y);

// Class 1 iff the model's class-1 probability strictly exceeds the threshold.
std::vector<int> predict(const LogisticModel& model, const FeatureMatrix& x,
                         double threshold = 0.4);
std::vector<int> predict(const MlpModel& model, const FeatureMatrix& x,
                         double threshold = 0.4);

struct ClassificationReport {
    struct PerClass {
        double precision = 0.0;
        double recall = 0.0;
        double f1 = 0.0;
        std::size_t support = 0;
    };
    PerClass c0, c1;
    std::array<std::array<std::size_t, 2>, 2> confusion{};  // [true][predicted]
};

ClassificationReport classification_report(const std::vector<int>& y_true,
                                           const std::vector<int>& y_pred);

// Tabular export: 8 statistic rows (precision/recall/f1/support per class),
// one column per model, in the map's (sorted) key order.
void write_reports_csv(const std::map<std::string, ClassificationReport>& reports,
                       const std::string& path);

void to_json(nlohmann::json& j, const ClassificationReport& report);
void to_json(nlohmann::json& j, const LogisticModel& model);
void from_json(const nlohmann::json& j, LogisticModel& model);
void to_json(nlohmann::json& j, const MlpModel& model);
void from_json(const nlohmann::json& j, MlpModel& model);

} // namespace bns

#endif
