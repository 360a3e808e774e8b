#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "astroturf/features.hpp"
#include "astroturf/matrix.hpp"
#include "astroturf/models.hpp"
#include "astroturf/store.hpp"

namespace astroturf::eval {

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    bool operator==(const RocPoint&) const = default;
};

struct RocResult {
    std::vector<RocPoint> points;  // starts at (0,0), ends at (1,1)
    double auc = 0.0;
    // Partial area over FPR in [0, bound], McClish-standardized: 0.5 for a
    // random ranking, 1 for a perfect one.
    double bounded_auc = 0.0;
};

// Labels: 1 = bot (positive), 0 = human. Sweeps thresholds by descending
// score; equal scores move as one step. Throws InvalidArgument when a class
// is missing.
RocResult roc_and_auc(std::span<const double> scores, std::span<const int> labels, double fpr_bound = 0.1);

// F1 of the bot class for predictions score >= threshold; 0 when precision
// or recall is undefined.
double f1_score(std::span<const double> scores, std::span<const int> labels, double threshold = 0.5);
double f1_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn);

// fold_of[i] in [0, k). Per class, shuffled members are dealt round-robin,
// the second class continuing where the first stopped, so each fold's class
// counts differ from n_c/k by less than one.
std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed);

struct CellMetrics {
    std::size_t repeat = 0;
    std::size_t fold = 0;
    double auc = 0.0;
    double bounded_auc = 0.0;
    double f1 = 0.0;
    bool operator==(const CellMetrics&) const = default;
};

struct Summary {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation over cells
    bool operator==(const Summary&) const = default;
};

Summary summarize(std::span<const double> values);

struct CvOptions {
    std::size_t folds = 10;
    std::size_t repeats = 100;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct CvResult {
    models::ModelSpec spec;
    std::vector<CellMetrics> cells;  // repeat-major
    Summary auc;
    Summary bounded_auc;
    Summary f1;
    // Held-out scores of every cell, pooled across repeats, for the ROC plot.
    std::vector<double> pooled_scores;
    std::vector<int> pooled_labels;
};

// Repeated stratified k-fold CV. Each repeat reshuffles with a seed derived
// from (seed, repeat); each cell trains on k-1 folds with a derived model
// seed. Throws InvalidArgument when folds exceed the minority class size.
CvResult cross_validate(const models::ModelSpec& spec, const Matrix& x, std::span<const int> y, const CvOptions& options);

// Ordered axes; expansion is the cartesian product with the first axis
// varying slowest.
using GridAxes = std::vector<std::pair<std::string, std::vector<double>>>;
using GridPoint = std::map<std::string, double>;

std::vector<GridPoint> expand_grid(const GridAxes& axes);
GridAxes default_grid(models::Family family);
// Reads the table named after the family (short or long name) from a TOML
// grid file; arrays become axes, scalars single-value axes. Falls back to
// the default grid when the file has no such table.
GridAxes load_grid(const std::filesystem::path& path, models::Family family);

struct GridResult {
    std::vector<CvResult> points;  // in grid declaration order
    std::size_t best = 0;

    const CvResult& best_result() const { return points.at(best); }
};

// Highest mean AUC wins; exact ties prefer fewer trees/stumps, then the
// stronger l2, then declaration order.
GridResult grid_search(models::Family family, const std::vector<GridPoint>& grid, const Matrix& x, std::span<const int> y,
                       const CvOptions& options, std::uint64_t model_seed = 0);

struct Extrapolation {
    std::vector<std::pair<UserId, double>> scores;  // unlabeled qualifying accounts
    std::size_t qualifying = 0;
    std::size_t predicted_bots = 0;
    std::size_t predicted_humans = 0;
    std::size_t labeled_bots = 0;
    std::size_t labeled_humans = 0;

    std::size_t total_bots() const { return predicted_bots + labeled_bots; }
    std::size_t total_humans() const { return predicted_humans + labeled_humans; }
    double bot_fraction() const {
        const std::size_t total = total_bots() + total_humans();
        return total == 0 ? 0.0 : static_cast<double>(total_bots()) / static_cast<double>(total);
    }
};

// Scores every account with at least min_tweets tweets; accounts present in
// `labels` keep their label and are merged into the totals.
Extrapolation extrapolate(const models::TrainedModel& model, const Store& store,
                          const std::map<UserId, features::Label>& labels, std::size_t min_tweets = 30,
                          unsigned threads = 1);

// Joins a feature table with labels, in feature-table order; rows without a
// label are skipped.
struct LabeledData {
    std::vector<UserId> ids;
    Matrix x;
    std::vector<int> y;
};

LabeledData join_labels(const features::FeatureTable& table, const std::map<UserId, features::Label>& labels);

}  // namespace astroturf::eval
