#include <doctest.h>

#include <cmath>
#include <limits>

#include "astroturf/error.hpp"
#include "astroturf/eval.hpp"
#include "astroturf/models.hpp"
#include "astroturf/rng.hpp"
#include "astroturf/tree.hpp"
#include "helpers.hpp"

using namespace astroturf;
using namespace astroturf::models;

namespace {

// Two overlapping Gaussian blobs; `gap` is the mean shift on every feature.
struct Data {
    Matrix x;
    std::vector<int> y;
};

Data blobs(std::size_t n, std::size_t d, double gap, std::uint64_t seed) {
    Rng rng(seed);
    Data data;
    data.x = Matrix(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        const int label = i % 3 == 0 ? 1 : 0;
        data.y.push_back(label);
        for (std::size_t j = 0; j < d; ++j) data.x(i, j) = rng.normal() * (1.0 + static_cast<double>(j)) + label * gap;
    }
    return data;
}

ModelSpec spec_of(Family f, std::map<std::string, double> hp = {}, std::uint64_t seed = 3) {
    ModelSpec s;
    s.family = f;
    s.hyperparameters = std::move(hp);
    s.seed = seed;
    return s;
}

double auc_of(const TrainedModel& m, const Data& d) {
    const auto scores = predict_scores(m, d.x);
    return eval::roc_and_auc(scores, d.y).auc;
}

}  // namespace

TEST_CASE("family names") {
    for (auto f : kFamilies) {
        CHECK(parse_family(to_string(f)) == f);
        CHECK(parse_family(short_name(f)) == f);
    }
    CHECK(parse_family("GB") == Family::GradientBoosting);
    CHECK_THROWS_AS(parse_family("xgboost"), InvalidArgument);
}

TEST_CASE("hyperparameter validation") {
    CHECK(spec_of(Family::GradientBoosting).param("trees") == 100);
    CHECK(spec_of(Family::KNeighbors).param("k") == 5);
    CHECK_THROWS_AS(spec_of(Family::GradientBoosting, {{"leaves", 3}}).validate(), InvalidArgument);
    CHECK_THROWS_AS(spec_of(Family::GradientBoosting, {{"learning_rate", 0}}).validate(), InvalidArgument);
    CHECK_THROWS_AS(spec_of(Family::KNeighbors, {{"k", 4}}).validate(), InvalidArgument);
    CHECK_THROWS_AS(spec_of(Family::RandomForest, {{"trees", 2.5}}).validate(), InvalidArgument);
    CHECK_THROWS_AS(spec_of(Family::LogisticRegression, {{"l2", -1}}).validate(), InvalidArgument);
    const auto s = spec_of(Family::GradientBoosting, {{"trees", 50}});
    CHECK(ModelSpec::from_json(s.to_json()) == s);
    CHECK(s.describe().find("trees=50") != std::string::npos);
}

TEST_CASE("training input errors") {
    const auto d = blobs(30, 3, 2.0, 1);
    std::vector<int> ones(30, 1);
    for (auto f : kFamilies) {
        CAPTURE(to_string(f));
        CHECK_THROWS_AS(train(spec_of(f), d.x, ones), InvalidArgument);
        CHECK_THROWS_AS(train(spec_of(f), d.x, std::span<const int>(d.y).first(29)), InvalidArgument);
        auto bad = d.x;
        bad(4, 1) = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(train(spec_of(f), bad, d.y), InvalidArgument);
        bad(4, 1) = std::nan("");
        CHECK_THROWS_AS(train(spec_of(f), bad, d.y), InvalidArgument);
    }
    Matrix one(1, 2);
    CHECK_THROWS_AS(train(spec_of(Family::LogisticRegression), one, std::vector<int>{1}), InvalidArgument);
}

TEST_CASE("every family: scores in [0,1], informative, deterministic, serializable") {
    const auto train_data = blobs(300, 4, 1.5, 10);
    const auto test_data = blobs(300, 4, 1.5, 11);
    const auto dir = testing::temp_dir("models");
    for (auto f : kFamilies) {
        CAPTURE(to_string(f));
        const auto spec = spec_of(f, f == Family::GradientBoosting ? std::map<std::string, double>{{"trees", 30}}
                                                                   : std::map<std::string, double>{});
        const auto m = train(spec, train_data.x, train_data.y, 2);
        for (double s : predict_scores(m, test_data.x)) {
            CHECK(s >= 0.0);
            CHECK(s <= 1.0);
        }
        CHECK(auc_of(m, test_data) > 0.8);

        // Same seed, different thread count: identical model.
        CHECK(to_json(train(spec, train_data.x, train_data.y, 1)) == to_json(m));

        const auto path = dir / (std::string(short_name(f)) + ".json");
        save(m, path);
        const auto back = load(path);
        CHECK(to_json(back) == to_json(m));
        CHECK(predict_scores(back, test_data.x) == predict_scores(m, test_data.x));

        CHECK_THROWS_AS(predict_score(m, std::vector<double>(3, 0.0)), InvalidArgument);
        // Missing values fall back to the training median.
        std::vector<double> row(4, std::nan(""));
        const double s = predict_score(m, row);
        CHECK(std::isfinite(s));
    }
}

TEST_CASE("logistic regression fits a separable problem") {
    Matrix x(40, 2);
    std::vector<int> y;
    for (std::size_t i = 0; i < 40; ++i) {
        x(i, 0) = static_cast<double>(i);
        x(i, 1) = std::sin(static_cast<double>(i));
        y.push_back(i >= 20 ? 1 : 0);
    }
    const auto m = train(spec_of(Family::LogisticRegression, {{"l2", 0.01}}), x, y);
    const auto scores = predict_scores(m, x);
    for (std::size_t i = 0; i < 40; ++i) CHECK((scores[i] >= 0.5) == (y[i] == 1));
    const auto& p = std::get<LinearParams>(m.parameters);
    CHECK(p.weights[0] > 0.0);
    CHECK(p.gradient_norm < 1e-6);
}

TEST_CASE("gradient boosting training loss never increases") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        for (double lr : {0.1, 1.0, 5.0}) {
            const auto d = blobs(200, 3, 0.5, seed);
            const auto m = train(spec_of(Family::GradientBoosting, {{"trees", 40}, {"learning_rate", lr}}), d.x, d.y);
            const auto& trace = std::get<GradientBoostingParams>(m.parameters).loss_trace;
            REQUIRE(trace.size() == 41);
            // Starting from the class prior, the initial loss is its binary entropy.
            double prior = 0.0;
            for (int v : d.y) prior += v;
            prior /= static_cast<double>(d.y.size());
            CHECK(trace.front() == doctest::Approx(-(prior * std::log(prior) + (1 - prior) * std::log(1 - prior))));
            for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-12);
            CHECK(trace.back() < trace.front());
        }
    }
}

TEST_CASE("a single unbagged forest tree equals plain CART") {
    const auto d = blobs(120, 3, 1.0, 5);
    const auto m = train(spec_of(Family::RandomForest, {{"trees", 1}, {"bootstrap", 0}, {"max_features", 3}}), d.x, d.y);
    const auto z = m.standardizer.apply(d.x);
    const std::vector<double> w(d.y.size(), 1.0);
    const auto cart = tree::fit_gini_tree(z, d.y, w, {});
    for (std::size_t i = 0; i < d.x.rows; ++i) CHECK(predict_score(m, d.x.row(i)) == cart.predict(z.row(i)));
    // Unlimited depth on distinct points reproduces the training labels.
    for (std::size_t i = 0; i < d.x.rows; ++i) CHECK(cart.predict(z.row(i)) == d.y[i]);
}

TEST_CASE("gini tree respects weights and depth") {
    Matrix x(6, 1);
    for (std::size_t i = 0; i < 6; ++i) x(i, 0) = static_cast<double>(i);
    const std::vector<int> y{0, 0, 0, 1, 1, 1};
    const auto stump = tree::fit_gini_tree(x, y, std::vector<double>(6, 1.0), {.max_depth = 1});
    CHECK(stump.depth() == 1);
    CHECK(stump.nodes[0].threshold == doctest::Approx(2.5));
    // Zero weights drop rows entirely.
    const auto half = tree::fit_gini_tree(x, y, std::vector<double>{1, 1, 1, 0, 0, 0}, {});
    CHECK(half.nodes.size() == 1);
    CHECK(half.nodes[0].value == 0.0);
}

TEST_CASE("k nearest neighbors votes") {
    Matrix x(5, 1);
    const std::vector<double> v{0.0, 1.0, 2.0, 10.0, 11.0};
    for (std::size_t i = 0; i < 5; ++i) x(i, 0) = v[i];
    const std::vector<int> y{1, 1, 0, 0, 0};
    const auto m = train(spec_of(Family::KNeighbors, {{"k", 3}}), x, y);
    CHECK(predict_score(m, std::vector<double>{0.5}) == doctest::Approx(2.0 / 3.0));
    CHECK(predict_score(m, std::vector<double>{10.5}) == doctest::Approx(0.0));
    CHECK(predict_score(m, std::vector<double>{-100.0}) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("standardized families ignore per-feature positive rescaling") {
    const auto d = blobs(200, 3, 1.0, 8);
    auto scaled = d.x;
    for (std::size_t i = 0; i < scaled.rows; ++i) {
        scaled(i, 0) = scaled(i, 0) * 1000.0 + 7.0;
        scaled(i, 2) *= 0.001;
    }
    for (auto f : {Family::LinearSVC, Family::LogisticRegression, Family::KNeighbors}) {
        CAPTURE(to_string(f));
        const auto a = predict_scores(train(spec_of(f), d.x, d.y), d.x);
        const auto b = predict_scores(train(spec_of(f), scaled, d.y), scaled);
        CHECK(eval::roc_and_auc(a, d.y).auc == doctest::Approx(eval::roc_and_auc(b, d.y).auc).epsilon(1e-9));
    }
}

TEST_CASE("standardizer uses training statistics only") {
    Matrix x(4, 1);
    x(0, 0) = 1;
    x(1, 0) = 2;
    x(2, 0) = std::nan("");
    x(3, 0) = 5;
    const auto s = Standardizer::fit(x);
    CHECK(s.median[0] == 2.0);
    CHECK(s.mean[0] == doctest::Approx(2.5));
    const auto z = s.apply(std::vector<double>{std::nan("")});
    CHECK(z[0] == doctest::Approx((2.0 - 2.5) / s.stddev[0]));
    // A constant column must not divide by zero.
    Matrix c(3, 1);
    const auto sc = Standardizer::fit(c);
    CHECK(std::isfinite(sc.apply(std::vector<double>{4.0})[0]));
}

TEST_CASE("adaboost stumps beat chance") {
    const auto d = blobs(200, 3, 1.0, 9);
    const auto m = train(spec_of(Family::AdaBoost, {{"stumps", 20}}), d.x, d.y);
    const auto& p = std::get<AdaBoostParams>(m.parameters);
    CHECK(p.stumps.size() <= 20);
    for (double e : p.stump_errors) CHECK(e < 0.5);
    for (const auto& s : p.stumps) CHECK(s.depth() <= 1);
}
