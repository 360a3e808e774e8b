#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "astroturf/matrix.hpp"
#include "astroturf/rng.hpp"

namespace astroturf::tree {

// Flat binary tree. Internal nodes send x[feature] <= threshold left.
struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;  // leaf output
};

class DecisionTree {
public:
    std::vector<Node> nodes;

    double predict(std::span<const double> x) const { return nodes[leaf_index(x)].value; }
    std::size_t leaf_index(std::span<const double> x) const;
    std::size_t depth() const;

    nlohmann::json to_json() const;
    static DecisionTree from_json(const nlohmann::json& j);
};

struct CartOptions {
    std::size_t max_depth = 0;          // 0 = unlimited
    std::size_t min_samples_split = 2;
    std::size_t max_features = 0;       // candidate features per node; 0 = all
};

// Classification tree on labels {0,1} with Gini impurity and non-negative
// sample weights (zero-weight rows are ignored, so bootstrap counts can be
// passed directly). Leaf value = weighted fraction of label 1. `rng` is
// used only when max_features is below the column count.
DecisionTree fit_gini_tree(const Matrix& x, std::span<const int> y, std::span<const double> weights,
                           const CartOptions& options, Rng* rng = nullptr);

// Per-feature row orders, computed once and shared by every boosting round.
struct Presorted {
    std::vector<std::vector<std::uint32_t>> order;  // order[f] sorts rows by column f
    static Presorted build(const Matrix& x);
};

// Least-squares regression tree on `target` (split gain S_L^2/n_L + S_R^2/n_R
// - S^2/n). Leaf values are left at 0; `leaf_of_row` receives each row's leaf
// node index so the caller can set leaf outputs itself.
DecisionTree fit_residual_tree(const Matrix& x, const Presorted& presorted, std::span<const double> target,
                               std::size_t max_depth, std::vector<std::int32_t>& leaf_of_row);

}  // namespace astroturf::tree
