#include "astroturf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "astroturf/config.hpp"
#include "astroturf/error.hpp"
#include "astroturf/parallel.hpp"
#include "astroturf/rng.hpp"

namespace astroturf::eval {

using models::Family;

RocResult roc_and_auc(std::span<const double> scores, std::span<const int> labels, double fpr_bound) {
    if (scores.size() != labels.size()) throw InvalidArgument("scores and labels differ in length");
    if (!(fpr_bound > 0.0 && fpr_bound <= 1.0)) throw InvalidArgument("fpr bound must be in (0, 1]");
    const auto pos = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
    const auto neg = static_cast<double>(labels.size()) - pos;
    if (pos == 0 || neg == 0) throw InvalidArgument("ROC needs both classes");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocResult r;
    r.points.push_back({0.0, 0.0});
    double tp = 0.0, fp = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            (labels[order[j]] == 1 ? tp : fp) += 1.0;
            ++j;
        }
        r.points.push_back({fp / neg, tp / pos});
        i = j;
    }
    for (std::size_t i = 1; i < r.points.size(); ++i) {
        const auto& a = r.points[i - 1];
        const auto& b = r.points[i];
        r.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
        if (a.fpr >= fpr_bound) continue;
        const double hi = std::min(b.fpr, fpr_bound);
        const double tpr_hi = b.fpr > a.fpr ? a.tpr + (b.tpr - a.tpr) * (hi - a.fpr) / (b.fpr - a.fpr) : b.tpr;
        r.bounded_auc += (hi - a.fpr) * (a.tpr + tpr_hi) / 2.0;
    }
    // McClish standardization: the diagonal maps to 0.5 and a perfect
    // ranking to 1, so values compare with the full AUC.
    const double chance = fpr_bound * fpr_bound / 2.0;
    r.bounded_auc = 0.5 * (1.0 + (r.bounded_auc - chance) / (fpr_bound - chance));
    r.auc = std::clamp(r.auc, 0.0, 1.0);
    r.bounded_auc = std::clamp(r.bounded_auc, 0.0, 1.0);
    return r;
}

double f1_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
    if (tp + fp == 0 || tp + fn == 0) return 0.0;
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

double f1_score(std::span<const double> scores, std::span<const int> labels, double threshold) {
    if (scores.size() != labels.size()) throw InvalidArgument("scores and labels differ in length");
    std::uint64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted = scores[i] >= threshold;
        if (predicted && labels[i] == 1) ++tp;
        if (predicted && labels[i] != 1) ++fp;
        if (!predicted && labels[i] == 1) ++fn;
    }
    return f1_from_counts(tp, fp, fn);
}

std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw InvalidArgument("need at least 2 folds");
    std::vector<std::size_t> neg, pos;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(i);
    if (std::min(neg.size(), pos.size()) < k) {
        throw InvalidArgument(std::to_string(k) + " folds exceed the minority class size " +
                              std::to_string(std::min(neg.size(), pos.size())));
    }
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(neg));
    rng.shuffle(std::span<std::size_t>(pos));
    std::vector<std::size_t> fold_of(labels.size());
    for (std::size_t i = 0; i < neg.size(); ++i) fold_of[neg[i]] = i % k;
    const std::size_t offset = neg.size() % k;
    for (std::size_t i = 0; i < pos.size(); ++i) fold_of[pos[i]] = (offset + i) % k;
    return fold_of;
}

Summary summarize(std::span<const double> values) {
    Summary s;
    if (values.empty()) return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

CvResult cross_validate(const models::ModelSpec& spec, const Matrix& x, std::span<const int> y, const CvOptions& options) {
    spec.validate();
    if (x.rows != y.size()) throw InvalidArgument("feature rows and labels differ in length");
    if (options.repeats == 0) throw InvalidArgument("need at least one repeat");
    const std::size_t k = options.folds;
    std::vector<std::vector<std::size_t>> fold_maps(options.repeats);
    for (std::size_t r = 0; r < options.repeats; ++r) fold_maps[r] = stratified_folds(y, k, mix_seed(options.seed, r));

    const std::size_t cells = options.repeats * k;
    CvResult result;
    result.spec = spec;
    result.cells.resize(cells);
    std::vector<std::vector<double>> held_scores(cells);
    std::vector<std::vector<int>> held_labels(cells);
    // Inner training is single-threaded; parallelism is across cells.
    parallel_for(cells, options.threads, [&](std::size_t c) {
        const std::size_t r = c / k, f = c % k;
        const auto& fold_of = fold_maps[r];
        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t i = 0; i < y.size(); ++i) (fold_of[i] == f ? test_idx : train_idx).push_back(i);
        std::vector<int> y_train, y_test;
        for (auto i : train_idx) y_train.push_back(y[i]);
        for (auto i : test_idx) y_test.push_back(y[i]);
        models::ModelSpec cell_spec = spec;
        cell_spec.seed = mix_seed(spec.seed ^ options.seed, c);
        const auto model = models::train(cell_spec, x.select_rows(train_idx), y_train);
        auto scores = models::predict_scores(model, x.select_rows(test_idx));
        const auto roc = roc_and_auc(scores, y_test);
        result.cells[c] = {r, f, roc.auc, roc.bounded_auc, f1_score(scores, y_test)};
        held_scores[c] = std::move(scores);
        held_labels[c] = std::move(y_test);
    });
    std::vector<double> auc, bounded, f1;
    for (const auto& cell : result.cells) {
        auc.push_back(cell.auc);
        bounded.push_back(cell.bounded_auc);
        f1.push_back(cell.f1);
    }
    result.auc = summarize(auc);
    result.bounded_auc = summarize(bounded);
    result.f1 = summarize(f1);
    for (std::size_t c = 0; c < cells; ++c) {
        result.pooled_scores.insert(result.pooled_scores.end(), held_scores[c].begin(), held_scores[c].end());
        result.pooled_labels.insert(result.pooled_labels.end(), held_labels[c].begin(), held_labels[c].end());
    }
    return result;
}

std::vector<GridPoint> expand_grid(const GridAxes& axes) {
    std::vector<GridPoint> points{GridPoint{}};
    for (const auto& [name, values] : axes) {
        if (values.empty()) throw InvalidArgument("grid axis '" + name + "' is empty");
        std::vector<GridPoint> next;
        for (const auto& p : points) {
            for (double v : values) {
                GridPoint q = p;
                q[name] = v;
                next.push_back(std::move(q));
            }
        }
        points = std::move(next);
    }
    return points;
}

GridAxes default_grid(Family family) {
    switch (family) {
        case Family::GradientBoosting: return {{"trees", {100, 300}}, {"depth", {2, 3}}, {"learning_rate", {0.05, 0.1}}};
        case Family::RandomForest: return {{"trees", {100, 300}}, {"depth", {0, 8}}};
        case Family::AdaBoost: return {{"stumps", {100, 300}}};
        case Family::LogisticRegression: return {{"l2", {0.01, 0.1, 1.0}}};
        case Family::KNeighbors: return {{"k", {5, 11, 21}}};
        case Family::LinearSVC: return {{"l2", {0.01, 0.1}}, {"epochs", {50}}};
    }
    return {};
}

GridAxes load_grid(const std::filesystem::path& path, Family family) {
    const auto doc = config::load_toml(path);
    const nlohmann::json* table = nullptr;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_object()) continue;
        try {
            if (models::parse_family(key) == family) table = &value;
        } catch (const InvalidArgument&) {
        }
    }
    if (!table) return default_grid(family);
    GridAxes axes;
    // nlohmann::json objects iterate alphabetically; keep the default grid's
    // axis order where names overlap so declaration order stays stable.
    for (const auto& [name, values] : table->items()) {
        std::vector<double> vs;
        auto to_value = [&](const nlohmann::json& v) {
            if (!v.is_number()) throw DataError(path.string() + ": grid value for '" + name + "' is not a number");
            double d = v.get<double>();
            if (name == "depth" && std::isinf(d)) d = 0;  // unlimited
            return d;
        };
        if (values.is_array()) {
            for (const auto& v : values) vs.push_back(to_value(v));
        } else {
            vs.push_back(to_value(values));
        }
        for (double v : vs) {
            models::ModelSpec probe;
            probe.family = family;
            probe.hyperparameters[name] = v;
            try {
                probe.validate();
            } catch (const InvalidArgument& e) {
                throw DataError(path.string() + ": " + e.what());
            }
        }
        axes.emplace_back(name, std::move(vs));
    }
    const auto defaults = default_grid(family);
    std::stable_sort(axes.begin(), axes.end(), [&](const auto& a, const auto& b) {
        auto rank = [&](const std::string& n) {
            for (std::size_t i = 0; i < defaults.size(); ++i) {
                if (defaults[i].first == n) return i;
            }
            return defaults.size();
        };
        return rank(a.first) < rank(b.first);
    });
    return axes;
}

namespace {

// Smaller is preferred on exact AUC ties.
std::tuple<double, double> tie_key(const models::ModelSpec& s) {
    switch (s.family) {
        case Family::GradientBoosting:
        case Family::RandomForest: return {s.param("trees"), 0.0};
        case Family::AdaBoost: return {s.param("stumps"), 0.0};
        case Family::LogisticRegression:
        case Family::LinearSVC: return {0.0, -s.param("l2")};
        case Family::KNeighbors: return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

}  // namespace

GridResult grid_search(Family family, const std::vector<GridPoint>& grid, const Matrix& x, std::span<const int> y,
                       const CvOptions& options, std::uint64_t model_seed) {
    if (grid.empty()) throw InvalidArgument("empty grid");
    GridResult result;
    for (const auto& point : grid) {
        models::ModelSpec spec{family, point, model_seed};
        result.points.push_back(cross_validate(spec, x, y, options));
    }
    for (std::size_t i = 1; i < result.points.size(); ++i) {
        const auto& cand = result.points[i];
        const auto& best = result.points[result.best];
        if (cand.auc.mean > best.auc.mean ||
            (cand.auc.mean == best.auc.mean && tie_key(cand.spec) < tie_key(best.spec))) {
            result.best = i;
        }
    }
    return result;
}

Extrapolation extrapolate(const models::TrainedModel& model, const Store& store,
                          const std::map<UserId, features::Label>& labels, std::size_t min_tweets, unsigned threads) {
    Extrapolation out;
    const auto corpus = features::build_corpus_stats(store);
    const auto table = features::extract_all(store, corpus, std::max<std::size_t>(min_tweets, 1), threads);
    out.qualifying = table.ids.size();
    for (std::size_t i = 0; i < table.ids.size(); ++i) {
        const UserId id = table.ids[i];
        if (auto it = labels.find(id); it != labels.end()) {
            ++(it->second == features::Label::Bot ? out.labeled_bots : out.labeled_humans);
            continue;
        }
        const double s = models::predict_score(model, table.rows[i]);
        out.scores.emplace_back(id, s);
        ++(s >= 0.5 ? out.predicted_bots : out.predicted_humans);
    }
    return out;
}

LabeledData join_labels(const features::FeatureTable& table, const std::map<UserId, features::Label>& labels) {
    LabeledData d;
    d.x.cols = features::kColumnCount;
    for (std::size_t i = 0; i < table.ids.size(); ++i) {
        auto it = labels.find(table.ids[i]);
        if (it == labels.end()) continue;
        d.ids.push_back(table.ids[i]);
        d.x.push_row(table.rows[i]);
        d.y.push_back(it->second == features::Label::Bot ? 1 : 0);
    }
    return d;
}

}  // namespace astroturf::eval
