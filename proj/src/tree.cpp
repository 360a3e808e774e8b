#include "astroturf/tree.hpp"

#include <algorithm>
#include <numeric>

#include "astroturf/error.hpp"

namespace astroturf::tree {

using nlohmann::json;

std::size_t DecisionTree::leaf_index(std::span<const double> x) const {
    std::size_t i = 0;
    while (nodes[i].feature >= 0) {
        const Node& n = nodes[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return i;
}

std::size_t DecisionTree::depth() const {
    if (nodes.empty()) return 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    std::size_t best = 0;
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        best = std::max(best, d);
        if (nodes[i].feature >= 0) {
            stack.emplace_back(static_cast<std::size_t>(nodes[i].left), d + 1);
            stack.emplace_back(static_cast<std::size_t>(nodes[i].right), d + 1);
        }
    }
    return best;
}

json DecisionTree::to_json() const {
    json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
         value = json::array();
    for (const auto& n : nodes) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        value.push_back(n.value);
    }
    return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"value", value}};
}

DecisionTree DecisionTree::from_json(const json& j) {
    DecisionTree t;
    const auto& feature = j.at("feature");
    const std::size_t n = feature.size();
    if (j.at("threshold").size() != n || j.at("left").size() != n || j.at("right").size() != n ||
        j.at("value").size() != n || n == 0) {
        throw DataError("corrupt tree: column lengths differ");
    }
    t.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Node& node = t.nodes[i];
        node.feature = feature[i].get<std::int32_t>();
        node.threshold = j["threshold"][i].get<double>();
        node.left = j["left"][i].get<std::int32_t>();
        node.right = j["right"][i].get<std::int32_t>();
        node.value = j["value"][i].get<double>();
        if (node.feature >= 0 && (node.left <= static_cast<std::int32_t>(i) || node.right <= static_cast<std::int32_t>(i) ||
                                  node.left >= static_cast<std::int32_t>(n) || node.right >= static_cast<std::int32_t>(n))) {
            throw DataError("corrupt tree: bad child index");
        }
    }
    return t;
}

namespace {

double midpoint(double lo, double hi) {
    double mid = lo + (hi - lo) / 2.0;
    return mid >= hi ? lo : mid;
}

struct GiniSplit {
    bool found = false;
    std::int32_t feature = -1;
    double threshold = 0.0;
    double score = 0.0;
};

}  // namespace

DecisionTree fit_gini_tree(const Matrix& x, std::span<const int> y, std::span<const double> weights,
                           const CartOptions& options, Rng* rng) {
    if (y.size() != x.rows || weights.size() != x.rows) throw InvalidArgument("tree: row count mismatch");
    const std::size_t d = x.cols;
    const std::size_t mtry = options.max_features == 0 ? d : std::min(options.max_features, d);
    if (mtry < d && !rng) throw InvalidArgument("tree: feature subsampling needs an rng");

    DecisionTree tree;
    struct Work {
        std::size_t node;
        std::vector<std::uint32_t> rows;
        std::size_t depth;
    };
    std::vector<std::uint32_t> root_rows;
    for (std::uint32_t i = 0; i < x.rows; ++i) {
        if (weights[i] > 0.0) root_rows.push_back(i);
    }
    if (root_rows.empty()) throw InvalidArgument("tree: no rows with positive weight");
    tree.nodes.emplace_back();
    std::vector<Work> stack;
    stack.push_back({0, std::move(root_rows), 0});

    std::vector<std::size_t> features(d);
    std::vector<std::uint32_t> sorted;
    while (!stack.empty()) {
        Work work = std::move(stack.back());
        stack.pop_back();
        double w_total = 0.0, w_pos = 0.0;
        for (auto r : work.rows) {
            w_total += weights[r];
            if (y[r] == 1) w_pos += weights[r];
        }
        tree.nodes[work.node].value = w_pos / w_total;
        const bool pure = w_pos == 0.0 || w_pos == w_total;
        if (pure || work.rows.size() < options.min_samples_split ||
            (options.max_depth > 0 && work.depth >= options.max_depth)) {
            continue;
        }

        std::iota(features.begin(), features.end(), std::size_t{0});
        if (mtry < d) {
            for (std::size_t i = 0; i < mtry; ++i) std::swap(features[i], features[i + rng->index(d - i)]);
            std::sort(features.begin(), features.begin() + static_cast<std::ptrdiff_t>(mtry));
        }
        const double w_neg = w_total - w_pos;
        const double parent_score = (w_pos * w_pos + w_neg * w_neg) / w_total;
        GiniSplit best;
        best.score = parent_score + 1e-12 * w_total;
        for (std::size_t k = 0; k < mtry; ++k) {
            const std::size_t f = features[k];
            sorted = work.rows;
            std::sort(sorted.begin(), sorted.end(), [&](std::uint32_t a, std::uint32_t b) {
                const double xa = x(a, f), xb = x(b, f);
                return xa != xb ? xa < xb : a < b;
            });
            double wl = 0.0, wl_pos = 0.0;
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                const auto r = sorted[i];
                wl += weights[r];
                if (y[r] == 1) wl_pos += weights[r];
                const double xv = x(r, f), xn = x(sorted[i + 1], f);
                if (xv == xn) continue;
                const double wr = w_total - wl;
                const double wr_pos = w_pos - wl_pos;
                const double wl_neg = wl - wl_pos, wr_neg = wr - wr_pos;
                const double score = (wl_pos * wl_pos + wl_neg * wl_neg) / wl + (wr_pos * wr_pos + wr_neg * wr_neg) / wr;
                if (score > best.score) {
                    best = {true, static_cast<std::int32_t>(f), midpoint(xv, xn), score};
                }
            }
        }
        if (!best.found) continue;

        std::vector<std::uint32_t> left_rows, right_rows;
        for (auto r : work.rows) {
            (x(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left_rows : right_rows).push_back(r);
        }
        const auto left = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        Node& node = tree.nodes[work.node];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = left;
        node.right = left + 1;
        // Right pushed first so the left subtree is expanded first.
        stack.push_back({static_cast<std::size_t>(left + 1), std::move(right_rows), work.depth + 1});
        stack.push_back({static_cast<std::size_t>(left), std::move(left_rows), work.depth + 1});
    }
    return tree;
}

Presorted Presorted::build(const Matrix& x) {
    Presorted p;
    p.order.resize(x.cols);
    for (std::size_t f = 0; f < x.cols; ++f) {
        auto& o = p.order[f];
        o.resize(x.rows);
        std::iota(o.begin(), o.end(), std::uint32_t{0});
        std::sort(o.begin(), o.end(), [&](std::uint32_t a, std::uint32_t b) {
            const double xa = x(a, f), xb = x(b, f);
            return xa != xb ? xa < xb : a < b;
        });
    }
    return p;
}

DecisionTree fit_residual_tree(const Matrix& x, const Presorted& presorted, std::span<const double> target,
                               std::size_t max_depth, std::vector<std::int32_t>& leaf_of_row) {
    const std::size_t d = x.cols;
    if (target.size() != x.rows) throw InvalidArgument("tree: target size mismatch");
    DecisionTree tree;
    leaf_of_row.assign(x.rows, 0);

    struct Work {
        std::size_t node;
        std::vector<std::vector<std::uint32_t>> lists;  // per feature, sorted
        std::size_t depth;
    };
    std::vector<Work> queue;
    queue.push_back({0, presorted.order, 0});
    tree.nodes.emplace_back();
    std::vector<char> goes_left(x.rows, 0);

    while (!queue.empty()) {
        Work work = std::move(queue.back());
        queue.pop_back();
        const auto& any = work.lists.front();
        const std::size_t n = any.size();
        for (auto r : any) leaf_of_row[r] = static_cast<std::int32_t>(work.node);
        if (work.depth >= max_depth || n < 2) continue;

        double total = 0.0;
        for (auto r : any) total += target[r];
        const double parent = total * total / static_cast<double>(n);
        double best_score = parent + 1e-12;
        std::int32_t best_feature = -1;
        double best_threshold = 0.0;
        for (std::size_t f = 0; f < d; ++f) {
            const auto& order = work.lists[f];
            double left_sum = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                left_sum += target[order[i]];
                const double xv = x(order[i], f), xn = x(order[i + 1], f);
                if (xv == xn) continue;
                const double nl = static_cast<double>(i + 1);
                const double nr = static_cast<double>(n - i - 1);
                const double right_sum = total - left_sum;
                const double score = left_sum * left_sum / nl + right_sum * right_sum / nr;
                if (score > best_score) {
                    best_score = score;
                    best_feature = static_cast<std::int32_t>(f);
                    best_threshold = midpoint(xv, xn);
                }
            }
        }
        if (best_feature < 0) continue;

        for (auto r : any) goes_left[r] = x(r, static_cast<std::size_t>(best_feature)) <= best_threshold;
        Work left_work{tree.nodes.size(), {}, work.depth + 1};
        Work right_work{tree.nodes.size() + 1, {}, work.depth + 1};
        left_work.lists.resize(d);
        right_work.lists.resize(d);
        for (std::size_t f = 0; f < d; ++f) {
            for (auto r : work.lists[f]) (goes_left[r] ? left_work.lists[f] : right_work.lists[f]).push_back(r);
        }
        const auto left = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        Node& node = tree.nodes[work.node];
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = left;
        node.right = left + 1;
        queue.push_back(std::move(right_work));
        queue.push_back(std::move(left_work));
    }
    return tree;
}

}  // namespace astroturf::tree
