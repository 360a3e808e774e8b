#include "astroturf/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "astroturf/csv.hpp"
#include "astroturf/error.hpp"
#include "astroturf/parallel.hpp"
#include "astroturf/rng.hpp"
#include "astroturf/text.hpp"

namespace astroturf::models {

using nlohmann::json;

namespace {

constexpr std::string_view kFormat = "astroturf-model";
constexpr int kFormatVersion = 1;

struct ParamRule {
    std::string_view name;
    double fallback;
    bool integer;
    double min;  // inclusive
};

const std::vector<ParamRule>& rules(Family f) {
    static const std::map<Family, std::vector<ParamRule>> table = {
        {Family::GradientBoosting, {{"trees", 100, true, 1}, {"depth", 3, true, 1}, {"learning_rate", 0.1, false, 0}}},
        {Family::RandomForest,
         {{"trees", 100, true, 1}, {"depth", 0, true, 0}, {"max_features", 0, true, 0}, {"bootstrap", 1, true, 0}}},
        {Family::AdaBoost, {{"stumps", 100, true, 1}}},
        {Family::LogisticRegression, {{"l2", 1.0, false, 0}, {"max_iter", 100, true, 1}}},
        {Family::KNeighbors, {{"k", 5, true, 1}}},
        {Family::LinearSVC, {{"l2", 0.1, false, 0}, {"epochs", 50, true, 1}}},
    };
    return table.at(f);
}

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double log_loss(int y, double margin) { return softplus(margin) - y * margin; }

}  // namespace

double logistic(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

std::string_view to_string(Family f) {
    switch (f) {
        case Family::GradientBoosting: return "GradientBoosting";
        case Family::RandomForest: return "RandomForest";
        case Family::AdaBoost: return "AdaBoost";
        case Family::LogisticRegression: return "LogisticRegression";
        case Family::KNeighbors: return "KNeighbors";
        case Family::LinearSVC: return "LinearSVC";
    }
    return "?";
}

std::string_view short_name(Family f) {
    switch (f) {
        case Family::GradientBoosting: return "gb";
        case Family::RandomForest: return "rf";
        case Family::AdaBoost: return "ada";
        case Family::LogisticRegression: return "lr";
        case Family::KNeighbors: return "knn";
        case Family::LinearSVC: return "linsvc";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    const std::string lowered = text::to_lower(name);
    for (Family f : kFamilies) {
        if (lowered == text::to_lower(to_string(f)) || lowered == short_name(f)) return f;
    }
    throw InvalidArgument("unknown model family '" + std::string(name) + "'");
}

double ModelSpec::param(std::string_view name) const {
    if (auto it = hyperparameters.find(std::string(name)); it != hyperparameters.end()) return it->second;
    for (const auto& r : rules(family)) {
        if (r.name == name) return r.fallback;
    }
    throw InvalidArgument(std::string(to_string(family)) + " has no hyperparameter '" + std::string(name) + "'");
}

void ModelSpec::validate() const {
    const auto& rs = rules(family);
    for (const auto& [name, value] : hyperparameters) {
        auto it = std::find_if(rs.begin(), rs.end(), [&](const ParamRule& r) { return r.name == name; });
        if (it == rs.end()) {
            throw InvalidArgument(std::string(to_string(family)) + " has no hyperparameter '" + name + "'");
        }
        if (std::isnan(value) || value < it->min || (it->integer && (std::isinf(value) || value != std::floor(value)))) {
            throw InvalidArgument("invalid " + name + " = " + csv::number(value));
        }
    }
    if (family == Family::GradientBoosting && !(param("learning_rate") > 0)) {
        throw InvalidArgument("learning_rate must be > 0");
    }
    if ((family == Family::LogisticRegression || family == Family::LinearSVC) && !(param("l2") > 0)) {
        throw InvalidArgument("l2 must be > 0");
    }
    if (family == Family::KNeighbors && static_cast<long long>(param("k")) % 2 == 0) {
        throw InvalidArgument("k must be odd");
    }
    if (family == Family::RandomForest && param("bootstrap") > 1) throw InvalidArgument("bootstrap must be 0 or 1");
}

std::string ModelSpec::describe() const {
    std::string out;
    for (const auto& r : rules(family)) {
        if (!out.empty()) out += ' ';
        out += std::string(r.name) + "=" + csv::number(param(r.name));
    }
    return out;
}

json ModelSpec::to_json() const {
    json hp = json::object();
    for (const auto& [k, v] : hyperparameters) hp[k] = v;
    return {{"family", to_string(family)}, {"hyperparameters", hp}, {"seed", seed}};
}

ModelSpec ModelSpec::from_json(const json& j) {
    ModelSpec s;
    s.family = parse_family(j.at("family").get<std::string>());
    for (const auto& [k, v] : j.at("hyperparameters").items()) s.hyperparameters[k] = v.get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.validate();
    return s;
}

Standardizer Standardizer::fit(const Matrix& x) {
    Standardizer s;
    const std::size_t d = x.cols;
    s.median.assign(d, 0.0);
    s.mean.assign(d, 0.0);
    s.stddev.assign(d, 1.0);
    std::vector<double> col;
    for (std::size_t j = 0; j < d; ++j) {
        col.clear();
        for (std::size_t i = 0; i < x.rows; ++i) {
            if (!std::isnan(x(i, j))) col.push_back(x(i, j));
        }
        if (!col.empty()) {
            std::sort(col.begin(), col.end());
            const std::size_t m = col.size();
            s.median[j] = m % 2 ? col[m / 2] : 0.5 * (col[m / 2 - 1] + col[m / 2]);
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) sum += std::isnan(x(i, j)) ? s.median[j] : x(i, j);
        const double mean = x.rows ? sum / static_cast<double>(x.rows) : 0.0;
        double var = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) {
            const double v = (std::isnan(x(i, j)) ? s.median[j] : x(i, j)) - mean;
            var += v * v;
        }
        const double sd = x.rows ? std::sqrt(var / static_cast<double>(x.rows)) : 0.0;
        s.mean[j] = mean;
        s.stddev[j] = sd > 1e-12 ? sd : 1.0;
    }
    return s;
}

std::vector<double> Standardizer::apply(std::span<const double> row) const {
    if (row.size() != mean.size()) {
        throw InvalidArgument("feature dimension " + std::to_string(row.size()) + " does not match model dimension " +
                              std::to_string(mean.size()));
    }
    std::vector<double> z(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
        const double v = std::isnan(row[j]) ? median[j] : row[j];
        z[j] = (v - mean[j]) / stddev[j];
    }
    return z;
}

Matrix Standardizer::apply(const Matrix& x) const {
    Matrix out(x.rows, x.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        auto z = apply(x.row(i));
        std::copy(z.begin(), z.end(), out.row(i).begin());
    }
    return out;
}

namespace {

// ---- GradientBoosting ------------------------------------------------------

GradientBoostingParams fit_gradient_boosting(const ModelSpec& spec, const Matrix& z, std::span<const int> y) {
    GradientBoostingParams p;
    const std::size_t n = z.rows;
    const auto rounds = static_cast<std::size_t>(spec.param("trees"));
    const auto depth = static_cast<std::size_t>(spec.param("depth"));
    p.learning_rate = spec.param("learning_rate");
    const double pos = static_cast<double>(std::count(y.begin(), y.end(), 1));
    p.init = std::log(pos / (static_cast<double>(n) - pos));

    std::vector<double> margin(n, p.init);
    auto mean_loss = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += log_loss(y[i], margin[i]);
        return s / static_cast<double>(n);
    };
    p.loss_trace.push_back(mean_loss());

    const auto presorted = tree::Presorted::build(z);
    std::vector<double> residual(n), hessian(n);
    std::vector<std::int32_t> leaf_of_row;
    for (std::size_t round = 0; round < rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            const double prob = logistic(margin[i]);
            residual[i] = y[i] - prob;
            hessian[i] = prob * (1.0 - prob);
        }
        tree::DecisionTree t = tree::fit_residual_tree(z, presorted, residual, depth, leaf_of_row);

        // Newton leaf values with shrinkage; a leaf whose step would raise its
        // own loss is halved until it does not.
        std::map<std::int32_t, std::vector<std::size_t>> members;
        for (std::size_t i = 0; i < n; ++i) members[leaf_of_row[i]].push_back(i);
        for (auto& [leaf, rows] : members) {
            double g = 0.0, h = 0.0, base = 0.0;
            for (auto i : rows) {
                g += residual[i];
                h += hessian[i];
                base += log_loss(y[i], margin[i]);
            }
            double step = h > 1e-12 ? p.learning_rate * g / h : 0.0;
            for (int halving = 0; halving < 60 && step != 0.0; ++halving) {
                double trial = 0.0;
                for (auto i : rows) trial += log_loss(y[i], margin[i] + step);
                if (trial <= base) break;
                step = halving == 59 ? 0.0 : step / 2.0;
            }
            t.nodes[static_cast<std::size_t>(leaf)].value = step;
        }
        std::vector<double> previous = margin;
        for (std::size_t i = 0; i < n; ++i) margin[i] += t.nodes[static_cast<std::size_t>(leaf_of_row[i])].value;
        double loss = mean_loss();
        if (loss > p.loss_trace.back()) {
            // Rounding in the total can exceed the per-leaf checks; drop the round.
            margin = std::move(previous);
            for (auto& node : t.nodes) node.value = 0.0;
            loss = p.loss_trace.back();
        }
        p.loss_trace.push_back(loss);
        p.trees.push_back(std::move(t));
    }
    return p;
}

// ---- RandomForest ----------------------------------------------------------

RandomForestParams fit_random_forest(const ModelSpec& spec, const Matrix& z, std::span<const int> y, unsigned threads) {
    RandomForestParams p;
    const auto n_trees = static_cast<std::size_t>(spec.param("trees"));
    tree::CartOptions opt;
    opt.max_depth = static_cast<std::size_t>(spec.param("depth"));
    const auto mf = static_cast<std::size_t>(spec.param("max_features"));
    opt.max_features = mf == 0 ? std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(z.cols)))) : mf;
    const bool bootstrap = spec.param("bootstrap") != 0.0;
    p.trees.resize(n_trees);
    // Each tree owns a sub-seeded stream, so results do not depend on scheduling.
    parallel_for(n_trees, threads, [&](std::size_t t) {
        Rng rng(mix_seed(spec.seed, t));
        std::vector<double> weights(z.rows, 1.0);
        if (bootstrap) {
            std::fill(weights.begin(), weights.end(), 0.0);
            for (std::size_t i = 0; i < z.rows; ++i) weights[rng.index(z.rows)] += 1.0;
        }
        p.trees[t] = tree::fit_gini_tree(z, y, weights, opt, &rng);
    });
    return p;
}

// ---- AdaBoost (SAMME, two classes) -------------------------------------------

AdaBoostParams fit_adaboost(const ModelSpec& spec, const Matrix& z, std::span<const int> y) {
    AdaBoostParams p;
    const std::size_t n = z.rows;
    const auto rounds = static_cast<std::size_t>(spec.param("stumps"));
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    tree::CartOptions opt;
    opt.max_depth = 1;
    for (std::size_t m = 0; m < rounds; ++m) {
        tree::DecisionTree stump = tree::fit_gini_tree(z, y, w, opt);
        std::vector<char> wrong(n);
        double err = 0.0, total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const int pred = stump.predict(z.row(i)) >= 0.5 ? 1 : 0;
            wrong[i] = pred != y[i];
            total += w[i];
            if (wrong[i]) err += w[i];
        }
        err /= total;
        if (err >= 0.5) break;
        p.stump_errors.push_back(err);
        if (err <= 1e-10) {
            p.alphas.push_back(std::log((1.0 - 1e-10) / 1e-10));
            p.stumps.push_back(std::move(stump));
            break;
        }
        const double alpha = std::log((1.0 - err) / err);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (wrong[i]) w[i] *= std::exp(alpha);
            sum += w[i];
        }
        for (auto& wi : w) wi /= sum;
        p.alphas.push_back(alpha);
        p.stumps.push_back(std::move(stump));
    }
    return p;
}

// ---- LogisticRegression: damped Newton on mean log-loss + l2/2 |w|^2 ----------

LinearParams fit_logistic(const ModelSpec& spec, const Matrix& z, std::span<const int> y) {
    const std::size_t n = z.rows, d = z.cols;
    const double l2 = spec.param("l2");
    const auto max_iter = static_cast<std::size_t>(spec.param("max_iter"));
    Eigen::MatrixXd X(n, d + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = z(i, j);
        X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = 1.0;
    }
    Eigen::VectorXd Y(n);
    for (std::size_t i = 0; i < n; ++i) Y(static_cast<Eigen::Index>(i)) = y[i];
    Eigen::VectorXd reg = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d + 1), l2);
    reg(static_cast<Eigen::Index>(d)) = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);

    auto objective = [&](const Eigen::VectorXd& beta) {
        Eigen::VectorXd m = X * beta;
        double s = 0.0;
        for (Eigen::Index i = 0; i < m.size(); ++i) s += log_loss(static_cast<int>(Y(i)), m(i));
        return s * inv_n + 0.5 * beta.cwiseProduct(reg).dot(beta);
    };

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d + 1));
    LinearParams out;
    double f = objective(beta);
    for (out.iterations = 0; out.iterations < max_iter; ++out.iterations) {
        Eigen::VectorXd m = X * beta;
        Eigen::VectorXd prob(m.size()), curv(m.size());
        for (Eigen::Index i = 0; i < m.size(); ++i) {
            prob(i) = logistic(m(i));
            curv(i) = prob(i) * (1.0 - prob(i));
        }
        Eigen::VectorXd grad = X.transpose() * (prob - Y) * inv_n + reg.cwiseProduct(beta);
        out.gradient_norm = grad.norm();
        if (out.gradient_norm < 1e-6) break;
        Eigen::MatrixXd H = X.transpose() * curv.asDiagonal() * X * inv_n;
        H.diagonal() += reg + Eigen::VectorXd::Constant(reg.size(), 1e-10);
        Eigen::VectorXd step = H.ldlt().solve(-grad);
        double t = 1.0;
        const double slope = grad.dot(step);
        Eigen::VectorXd candidate;
        double fc = f;
        for (int k = 0; k < 50; ++k) {
            candidate = beta + t * step;
            fc = objective(candidate);
            if (fc <= f + 1e-4 * t * slope) break;
            t *= 0.5;
        }
        if (!(fc <= f)) break;
        beta = candidate;
        f = fc;
    }
    out.weights.assign(beta.data(), beta.data() + d);
    out.bias = beta(static_cast<Eigen::Index>(d));
    return out;
}

// ---- LinearSVC: Pegasos subgradient on hinge loss -----------------------------
// The bias is an extra constant input (regularized with the weights); the
// returned weights average the iterates of the final epoch.

LinearParams fit_linear_svc(const ModelSpec& spec, const Matrix& z, std::span<const int> y) {
    const std::size_t n = z.rows, d = z.cols;
    const double l2 = spec.param("l2");
    const auto epochs = static_cast<std::size_t>(spec.param("epochs"));
    Rng rng(mix_seed(spec.seed, 0x5c));
    std::vector<double> w(d + 1, 0.0), avg(d + 1, 0.0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t step = 0;
    for (std::size_t e = 0; e < epochs; ++e) {
        rng.shuffle(std::span<std::size_t>(order));
        const bool last = e + 1 == epochs;
        for (auto i : order) {
            ++step;
            const double eta = 1.0 / (l2 * static_cast<double>(step));
            const double label = y[i] == 1 ? 1.0 : -1.0;
            auto row = z.row(i);
            double margin = w[d];
            for (std::size_t j = 0; j < d; ++j) margin += w[j] * row[j];
            const double shrink = 1.0 - eta * l2;
            for (auto& wj : w) wj *= shrink;
            if (label * margin < 1.0) {
                for (std::size_t j = 0; j < d; ++j) w[j] += eta * label * row[j];
                w[d] += eta * label;
            }
            if (last) {
                for (std::size_t j = 0; j <= d; ++j) avg[j] += w[j];
            }
        }
    }
    LinearParams out;
    out.iterations = step;
    for (auto& a : avg) a /= static_cast<double>(n);
    out.weights.assign(avg.begin(), avg.begin() + static_cast<std::ptrdiff_t>(d));
    out.bias = avg[d];
    return out;
}

void check_training_data(const Matrix& x, std::span<const int> y) {
    if (x.rows != y.size()) throw InvalidArgument("feature rows and labels differ in length");
    if (x.rows < 2) throw InvalidArgument("need at least two training rows");
    bool pos = false, neg = false;
    for (int v : y) {
        if (v == 1) {
            pos = true;
        } else if (v == 0) {
            neg = true;
        } else {
            throw InvalidArgument("labels must be 0 (human) or 1 (bot)");
        }
    }
    if (!pos || !neg) throw InvalidArgument("training labels contain a single class");
    for (double v : x.data) {
        if (!std::isfinite(v)) throw InvalidArgument("training features must be finite");
    }
}

}  // namespace

TrainedModel train(const ModelSpec& spec, const Matrix& x, std::span<const int> y, unsigned threads) {
    spec.validate();
    check_training_data(x, y);
    TrainedModel model;
    model.spec = spec;
    model.standardizer = Standardizer::fit(x);
    const Matrix z = model.standardizer.apply(x);
    switch (spec.family) {
        case Family::GradientBoosting: model.parameters = fit_gradient_boosting(spec, z, y); break;
        case Family::RandomForest: model.parameters = fit_random_forest(spec, z, y, threads); break;
        case Family::AdaBoost: model.parameters = fit_adaboost(spec, z, y); break;
        case Family::LogisticRegression: model.parameters = fit_logistic(spec, z, y); break;
        case Family::KNeighbors: {
            const auto k = static_cast<std::size_t>(spec.param("k"));
            if (k > z.rows) throw InvalidArgument("k exceeds the number of training rows");
            model.parameters = NeighborParams{z, std::vector<int>(y.begin(), y.end())};
            break;
        }
        case Family::LinearSVC: model.parameters = fit_linear_svc(spec, z, y); break;
    }
    return model;
}

namespace {

double knn_fraction(const NeighborParams& p, std::size_t k, std::span<const double> z) {
    std::vector<std::pair<double, std::size_t>> dist(p.points.rows);
    for (std::size_t i = 0; i < p.points.rows; ++i) {
        auto row = p.points.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < z.size(); ++j) {
            const double diff = row[j] - z[j];
            s += diff * diff;
        }
        dist[i] = {s, i};
    }
    k = std::min(k, dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::size_t bots = 0;
    for (std::size_t i = 0; i < k; ++i) bots += p.labels[dist[i].second] == 1;
    return static_cast<double>(bots) / static_cast<double>(k);
}

double linear_margin(const LinearParams& p, std::span<const double> z) {
    double m = p.bias;
    for (std::size_t j = 0; j < z.size(); ++j) m += p.weights[j] * z[j];
    return m;
}

}  // namespace

double decision_value(const TrainedModel& model, std::span<const double> x) {
    const auto z = model.standardizer.apply(x);
    for (double v : z) {
        if (!std::isfinite(v)) throw InvalidArgument("non-finite feature value");
    }
    switch (model.spec.family) {
        case Family::GradientBoosting: {
            const auto& p = std::get<GradientBoostingParams>(model.parameters);
            double m = p.init;
            for (const auto& t : p.trees) m += t.predict(z);
            return m;
        }
        case Family::RandomForest: {
            const auto& p = std::get<RandomForestParams>(model.parameters);
            double s = 0.0;
            for (const auto& t : p.trees) s += t.predict(z);
            return s / static_cast<double>(p.trees.size());
        }
        case Family::AdaBoost: {
            const auto& p = std::get<AdaBoostParams>(model.parameters);
            double m = 0.0;
            for (std::size_t i = 0; i < p.stumps.size(); ++i) m += p.alphas[i] * (p.stumps[i].predict(z) >= 0.5 ? 1.0 : -1.0);
            return m;
        }
        case Family::LogisticRegression:
        case Family::LinearSVC: return linear_margin(std::get<LinearParams>(model.parameters), z);
        case Family::KNeighbors:
            return knn_fraction(std::get<NeighborParams>(model.parameters), static_cast<std::size_t>(model.spec.param("k")), z);
    }
    return 0.0;
}

double predict_score(const TrainedModel& model, std::span<const double> x) {
    const double v = decision_value(model, x);
    switch (model.spec.family) {
        case Family::RandomForest:
        case Family::KNeighbors: return std::clamp(v, 0.0, 1.0);
        default: return logistic(v);
    }
}

std::vector<double> predict_scores(const TrainedModel& model, const Matrix& x) {
    std::vector<double> out(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) out[i] = predict_score(model, x.row(i));
    return out;
}

namespace {

json trees_json(const std::vector<tree::DecisionTree>& trees) {
    json arr = json::array();
    for (const auto& t : trees) arr.push_back(t.to_json());
    return arr;
}

std::vector<tree::DecisionTree> trees_from(const json& arr) {
    std::vector<tree::DecisionTree> out;
    for (const auto& t : arr) out.push_back(tree::DecisionTree::from_json(t));
    return out;
}

}  // namespace

json to_json(const TrainedModel& model) {
    json params;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GradientBoostingParams>) {
                params = {{"init", p.init}, {"learning_rate", p.learning_rate}, {"trees", trees_json(p.trees)}, {"loss_trace", p.loss_trace}};
            } else if constexpr (std::is_same_v<T, RandomForestParams>) {
                params = {{"trees", trees_json(p.trees)}};
            } else if constexpr (std::is_same_v<T, AdaBoostParams>) {
                params = {{"stumps", trees_json(p.stumps)}, {"alphas", p.alphas}, {"stump_errors", p.stump_errors}};
            } else if constexpr (std::is_same_v<T, LinearParams>) {
                params = {{"weights", p.weights}, {"bias", p.bias}, {"iterations", p.iterations}, {"gradient_norm", p.gradient_norm}};
            } else {
                params = {{"rows", p.points.rows}, {"cols", p.points.cols}, {"points", p.points.data}, {"labels", p.labels}};
            }
        },
        model.parameters);
    return {{"format", kFormat},
            {"version", kFormatVersion},
            {"spec", model.spec.to_json()},
            {"standardizer",
             {{"median", model.standardizer.median}, {"mean", model.standardizer.mean}, {"stddev", model.standardizer.stddev}}},
            {"parameters", params}};
}

TrainedModel from_json(const json& j) {
    try {
        if (j.at("format").get<std::string>() != kFormat) throw DataError("not a model file");
        if (j.at("version").get<int>() != kFormatVersion) {
            throw DataError("unsupported model version " + std::to_string(j.at("version").get<int>()));
        }
        TrainedModel m;
        m.spec = ModelSpec::from_json(j.at("spec"));
        const auto& s = j.at("standardizer");
        m.standardizer.median = s.at("median").get<std::vector<double>>();
        m.standardizer.mean = s.at("mean").get<std::vector<double>>();
        m.standardizer.stddev = s.at("stddev").get<std::vector<double>>();
        if (m.standardizer.median.size() != m.standardizer.mean.size() || m.standardizer.stddev.size() != m.standardizer.mean.size()) {
            throw DataError("corrupt standardizer");
        }
        const auto& p = j.at("parameters");
        switch (m.spec.family) {
            case Family::GradientBoosting:
                m.parameters = GradientBoostingParams{p.at("init").get<double>(), p.at("learning_rate").get<double>(),
                                                      trees_from(p.at("trees")), p.at("loss_trace").get<std::vector<double>>()};
                break;
            case Family::RandomForest: m.parameters = RandomForestParams{trees_from(p.at("trees"))}; break;
            case Family::AdaBoost:
                m.parameters = AdaBoostParams{trees_from(p.at("stumps")), p.at("alphas").get<std::vector<double>>(),
                                              p.at("stump_errors").get<std::vector<double>>()};
                break;
            case Family::LogisticRegression:
            case Family::LinearSVC:
                m.parameters = LinearParams{p.at("weights").get<std::vector<double>>(), p.at("bias").get<double>(),
                                            p.at("iterations").get<std::size_t>(), p.at("gradient_norm").get<double>()};
                break;
            case Family::KNeighbors: {
                NeighborParams np;
                np.points.rows = p.at("rows").get<std::size_t>();
                np.points.cols = p.at("cols").get<std::size_t>();
                np.points.data = p.at("points").get<std::vector<double>>();
                np.labels = p.at("labels").get<std::vector<int>>();
                if (np.points.data.size() != np.points.rows * np.points.cols || np.labels.size() != np.points.rows) {
                    throw DataError("corrupt neighbor table");
                }
                m.parameters = std::move(np);
                break;
            }
        }
        return m;
    } catch (const json::exception& e) {
        throw DataError(std::string("corrupt model: ") + e.what());
    }
}

void save(const TrainedModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << to_json(model).dump() << '\n';
    if (!out) throw DataError("write failed: " + path.string());
}

TrainedModel load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return from_json(j);
}

}  // namespace astroturf::models
