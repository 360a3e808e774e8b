#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "astroturf/matrix.hpp"
#include "astroturf/tree.hpp"

namespace astroturf::models {

enum class Family { GradientBoosting, RandomForest, AdaBoost, LogisticRegression, KNeighbors, LinearSVC };

inline constexpr std::array<Family, 6> kFamilies = {Family::GradientBoosting, Family::RandomForest,
                                                    Family::AdaBoost,         Family::LogisticRegression,
                                                    Family::KNeighbors,       Family::LinearSVC};

// Long name ("GradientBoosting") and short CLI name ("gb").
std::string_view to_string(Family f);
std::string_view short_name(Family f);
// Accepts either spelling, case-insensitive.
Family parse_family(std::string_view name);

// Hyperparameters per family (defaults in parentheses):
//   GradientBoosting   trees (100), depth (3), learning_rate (0.1)
//   RandomForest       trees (100), depth (0 = unlimited), max_features (0 = sqrt d), bootstrap (1)
//   AdaBoost           stumps (100)
//   LogisticRegression l2 (1.0), max_iter (100)
//   KNeighbors         k (5, odd)
//   LinearSVC          l2 (0.1), epochs (50)
struct ModelSpec {
    Family family = Family::GradientBoosting;
    std::map<std::string, double> hyperparameters;
    std::uint64_t seed = 0;

    // Value of a hyperparameter, falling back to the family default.
    double param(std::string_view name) const;
    // Throws InvalidArgument on unknown names or out-of-range values.
    void validate() const;
    std::string describe() const;  // "trees=100 depth=3 learning_rate=0.1"

    nlohmann::json to_json() const;
    static ModelSpec from_json(const nlohmann::json& j);
    bool operator==(const ModelSpec&) const = default;
};

// Median imputation followed by z-scoring, fitted on training rows only.
struct Standardizer {
    std::vector<double> median;
    std::vector<double> mean;
    std::vector<double> stddev;

    static Standardizer fit(const Matrix& x);
    std::vector<double> apply(std::span<const double> row) const;
    Matrix apply(const Matrix& x) const;
};

struct GradientBoostingParams {
    double init = 0.0;
    double learning_rate = 0.1;
    std::vector<tree::DecisionTree> trees;
    std::vector<double> loss_trace;  // mean training log-loss: initial, then after each round
};

struct RandomForestParams {
    std::vector<tree::DecisionTree> trees;
};

struct AdaBoostParams {
    std::vector<tree::DecisionTree> stumps;
    std::vector<double> alphas;
    std::vector<double> stump_errors;  // weighted training error of each fitted stump
};

struct LinearParams {  // LogisticRegression and LinearSVC
    std::vector<double> weights;
    double bias = 0.0;
    std::size_t iterations = 0;
    double gradient_norm = 0.0;  // LogisticRegression only
};

struct NeighborParams {
    Matrix points;  // standardized
    std::vector<int> labels;
};

using Parameters = std::variant<GradientBoostingParams, RandomForestParams, AdaBoostParams, LinearParams, NeighborParams>;

struct TrainedModel {
    ModelSpec spec;
    Standardizer standardizer;
    Parameters parameters;

    std::size_t dimension() const { return standardizer.mean.size(); }
};

// Labels are 1 = bot, 0 = human. Throws InvalidArgument on fewer than two
// rows, a single class, size mismatch or non-finite features.
TrainedModel train(const ModelSpec& spec, const Matrix& x, std::span<const int> y, unsigned threads = 1);

// Score in [0,1], higher = more bot-like. Throws on a dimension mismatch;
// NaN entries are imputed with the training median.
double predict_score(const TrainedModel& model, std::span<const double> x);

// Raw decision value before the logistic link (bot-neighbor fraction for kNN,
// mean leaf probability for RandomForest).
double decision_value(const TrainedModel& model, std::span<const double> x);

std::vector<double> predict_scores(const TrainedModel& model, const Matrix& x);

nlohmann::json to_json(const TrainedModel& model);
TrainedModel from_json(const nlohmann::json& j);
void save(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load(const std::filesystem::path& path);

double logistic(double z);

}  // namespace astroturf::models
