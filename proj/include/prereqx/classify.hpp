#pragma once

// Prerequisite classification: the thresholded statistical model with its
// F1-sweep tuning, and the four supervised learners (random forest, linear
// SVM, logistic regression, gaussian naive bayes). Features are standardized
// with training-set statistics only; all randomness flows from the seed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "prereqx/wiki_features.hpp"

namespace prereqx {

struct ThresholdModel {
    double theta = 0.0;
};

inline int stat_classify(double omega, const ThresholdModel& model) {
    return omega > model.theta ? 1 : 0;
}

// theta sweep grid {0.0, 0.02, ..., 1.0}
inline std::vector<double> theta_grid() {
    std::vector<double> grid;
    grid.reserve(51);
    for (int i = 0; i <= 50; ++i) grid.push_back(static_cast<double>(i) * 0.02);
    return grid;
}

struct ScoredPair {
    double score = 0.0;
    int label = 0;
};

inline double f1_at_threshold(const std::vector<ScoredPair>& pairs, double theta) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& p : pairs) {
        int pred = p.score > theta ? 1 : 0;
        if (pred == 1 && p.label == 1) ++tp;
        else if (pred == 1 && p.label == 0) ++fp;
        else if (pred == 0 && p.label == 1) ++fn;
    }
    double precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    double recall = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    return (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

// Best F1 over the grid; ties go to the smallest theta.
inline ThresholdModel tune_theta(const std::vector<ScoredPair>& pairs) {
    bool any_positive = false;
    for (const auto& p : pairs)
        if (p.label == 1) any_positive = true;
    if (!any_positive) throw Error("tune_theta requires at least one positive label");
    ThresholdModel best{0.0};
    double best_f1 = -1.0;
    for (double theta : theta_grid()) {
        double f1 = f1_at_threshold(pairs, theta);
        if (f1 > best_f1) {
            best_f1 = f1;
            best.theta = theta;
        }
    }
    return best;
}

enum class ModelKind { RandomForest, LinearSvm, LogisticRegression, NaiveBayes };

inline std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::RandomForest: return "random_forest";
        case ModelKind::LinearSvm: return "linear_svm";
        case ModelKind::LogisticRegression: return "logistic_regression";
        case ModelKind::NaiveBayes: return "naive_bayes";
    }
    return "?";
}

inline ModelKind model_kind_from_string(const std::string& s) {
    if (s == "random_forest" || s == "rf") return ModelKind::RandomForest;
    if (s == "linear_svm" || s == "svm") return ModelKind::LinearSvm;
    if (s == "logistic_regression" || s == "lr") return ModelKind::LogisticRegression;
    if (s == "naive_bayes" || s == "nb") return ModelKind::NaiveBayes;
    throw Error("unknown model kind '" + s + "'");
}

struct TrainConfig {
    ModelKind kind = ModelKind::RandomForest;
    std::uint32_t seed = 42;
    double c = 1.0;          // inverse regularization for LR / SVM
    int trees = 200;         // random forest size
    double learning_rate = 0.1;
    int epochs = 1000;
    int max_depth = 0;       // 0 = unlimited
    int min_leaf = 1;
};

// Zero-mean unit-variance scaling fitted on training rows only.
struct Standardizer {
    std::vector<double> means;
    std::vector<double> scales;

    static Standardizer fit(const std::vector<std::vector<double>>& rows) {
        Standardizer s;
        if (rows.empty()) return s;
        std::size_t d = rows.front().size();
        s.means.assign(d, 0.0);
        s.scales.assign(d, 1.0);
        for (const auto& r : rows)
            for (std::size_t j = 0; j < d; ++j) s.means[j] += r[j];
        for (double& m : s.means) m /= static_cast<double>(rows.size());
        std::vector<double> var(d, 0.0);
        for (const auto& r : rows)
            for (std::size_t j = 0; j < d; ++j) {
                double delta = r[j] - s.means[j];
                var[j] += delta * delta;
            }
        for (std::size_t j = 0; j < d; ++j) {
            double sd = std::sqrt(var[j] / static_cast<double>(rows.size()));
            s.scales[j] = sd > 1e-12 ? sd : 1.0;
        }
        return s;
    }

    std::vector<double> transform(const std::vector<double>& row) const {
        std::vector<double> out(row.size());
        for (std::size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - means[j]) / scales[j];
        return out;
    }
};

namespace detail {

struct LinearParams {
    std::vector<double> weights;
    double bias = 0.0;

    double margin(const std::vector<double>& x) const {
        double z = bias;
        for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * x[j];
        return z;
    }
};

struct GaussianNbParams {
    double prior1 = 0.5;
    std::vector<double> mean0, var0;
    std::vector<double> mean1, var1;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double p1 = 0.0;  // positive fraction at a leaf
};

using Tree = std::vector<TreeNode>;

struct ForestParams {
    std::vector<Tree> trees;
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double tree_predict(const Tree& tree, const std::vector<double>& x) {
    int node = 0;
    while (tree[node].feature >= 0)
        node = x[static_cast<std::size_t>(tree[node].feature)] <= tree[node].threshold
                   ? tree[node].left
                   : tree[node].right;
    return tree[node].p1;
}

// Gini impurity of a (count1, total) split side.
inline double gini(double count1, double total) {
    if (total <= 0.0) return 0.0;
    double p = count1 / total;
    return 2.0 * p * (1.0 - p);
}

class TreeBuilder {
public:
    TreeBuilder(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                int max_depth, int min_leaf, std::mt19937& rng)
        : x_(x), y_(y), max_depth_(max_depth), min_leaf_(min_leaf), rng_(rng) {
        n_features_ = x.empty() ? 0 : x.front().size();
        mtry_ = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n_features_))));
        if (mtry_ == 0) mtry_ = 1;
    }

    Tree build(const std::vector<std::size_t>& sample) {
        tree_.clear();
        grow(sample, 0);
        return std::move(tree_);
    }

private:
    int grow(const std::vector<std::size_t>& idx, int depth) {
        double count1 = 0;
        for (std::size_t i : idx) count1 += y_[i];
        double total = static_cast<double>(idx.size());
        int node_id = static_cast<int>(tree_.size());
        tree_.push_back(TreeNode{});
        tree_[node_id].p1 = total > 0.0 ? count1 / total : 0.0;

        bool pure = count1 == 0.0 || count1 == total;
        bool depth_stop = max_depth_ > 0 && depth >= max_depth_;
        if (pure || depth_stop || idx.size() < 2 * static_cast<std::size_t>(min_leaf_)) return node_id;

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_impurity = gini(count1, total);
        for (std::size_t f : sample_features()) {
            std::vector<std::pair<double, int>> values;
            values.reserve(idx.size());
            for (std::size_t i : idx) values.emplace_back(x_[i][f], y_[i]);
            std::sort(values.begin(), values.end());
            double left1 = 0, left_total = 0;
            for (std::size_t k = 0; k + 1 < values.size(); ++k) {
                left1 += values[k].second;
                left_total += 1.0;
                if (values[k].first == values[k + 1].first) continue;
                double right_total = total - left_total;
                if (left_total < min_leaf_ || right_total < min_leaf_) continue;
                double impurity = (left_total / total) * gini(left1, left_total) +
                                  (right_total / total) * gini(count1 - left1, right_total);
                if (impurity + 1e-12 < best_impurity) {
                    best_impurity = impurity;
                    best_feature = static_cast<int>(f);
                    best_threshold = (values[k].first + values[k + 1].first) / 2.0;
                }
            }
        }
        if (best_feature < 0) return node_id;

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : idx)
            (x_[i][static_cast<std::size_t>(best_feature)] <= best_threshold ? left_idx : right_idx)
                .push_back(i);
        if (left_idx.empty() || right_idx.empty()) return node_id;

        tree_[node_id].feature = best_feature;
        tree_[node_id].threshold = best_threshold;
        int left = grow(left_idx, depth + 1);
        int right = grow(right_idx, depth + 1);
        tree_[node_id].left = left;
        tree_[node_id].right = right;
        return node_id;
    }

    // mtry distinct feature indices, in ascending order for determinism
    std::vector<std::size_t> sample_features() {
        std::vector<std::size_t> all(n_features_);
        for (std::size_t i = 0; i < n_features_; ++i) all[i] = i;
        for (std::size_t i = 0; i < mtry_ && i < all.size(); ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
            std::swap(all[i], all[pick(rng_)]);
        }
        all.resize(std::min(mtry_, all.size()));
        std::sort(all.begin(), all.end());
        return all;
    }

    const std::vector<std::vector<double>>& x_;
    const std::vector<int>& y_;
    int max_depth_;
    int min_leaf_;
    std::mt19937& rng_;
    std::size_t n_features_ = 0;
    std::size_t mtry_ = 1;
    Tree tree_;
};

}  // namespace detail

struct Predictions {
    std::vector<int> labels;
    std::vector<double> scores;  // probability, vote fraction, or margin
};

class TrainedClassifier {
public:
    static TrainedClassifier train(const std::vector<std::vector<double>>& rows,
                                   const std::vector<int>& labels,
                                   const std::vector<std::string>& schema,
                                   const TrainConfig& config) {
        if (rows.empty()) throw Error("training requires at least one row");
        if (rows.size() != labels.size()) throw Error("rows and labels differ in length");
        bool has_pos = false, has_neg = false;
        for (int y : labels) (y == 1 ? has_pos : has_neg) = true;
        if (!has_pos || !has_neg) throw Error("training requires both classes");

        TrainedClassifier model;
        model.kind_ = config.kind;
        model.seed_ = config.seed;
        model.schema_ = schema;
        model.standardizer_ = Standardizer::fit(rows);

        std::vector<std::vector<double>> x;
        x.reserve(rows.size());
        for (const auto& r : rows) {
            if (r.size() != schema.size()) throw Error("row width does not match feature schema");
            x.push_back(model.standardizer_.transform(r));
        }

        switch (config.kind) {
            case ModelKind::LogisticRegression:
                model.params_ = train_logistic(x, labels, config);
                break;
            case ModelKind::LinearSvm:
                model.params_ = train_svm(x, labels, config);
                break;
            case ModelKind::NaiveBayes:
                model.params_ = train_nb(x, labels);
                break;
            case ModelKind::RandomForest:
                model.params_ = train_forest(x, labels, config);
                break;
        }
        return model;
    }

    Predictions predict(const std::vector<std::vector<double>>& rows,
                        const std::vector<std::string>& schema) const {
        if (schema != schema_) throw Error("feature schema does not match the trained model");
        Predictions out;
        out.labels.reserve(rows.size());
        out.scores.reserve(rows.size());
        for (const auto& r : rows) {
            if (r.size() != schema_.size()) throw Error("row width does not match feature schema");
            std::vector<double> x = standardizer_.transform(r);
            double score = score_row(x);
            out.scores.push_back(score);
            if (kind_ == ModelKind::LinearSvm)
                out.labels.push_back(score > 0.0 ? 1 : 0);
            else
                out.labels.push_back(score > 0.5 ? 1 : 0);
        }
        return out;
    }

    ModelKind kind() const { return kind_; }
    std::uint32_t seed() const { return seed_; }
    const std::vector<std::string>& schema() const { return schema_; }
    const Standardizer& standardizer() const { return standardizer_; }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["kind"] = to_string(kind_);
        j["seed"] = seed_;
        j["feature_schema"] = schema_;
        j["standardizer"] = {{"means", standardizer_.means}, {"scales", standardizer_.scales}};
        if (const auto* lin = std::get_if<detail::LinearParams>(&params_)) {
            j["params"] = {{"weights", lin->weights}, {"bias", lin->bias}};
        } else if (const auto* nb = std::get_if<detail::GaussianNbParams>(&params_)) {
            j["params"] = {{"prior1", nb->prior1},
                           {"mean0", nb->mean0},
                           {"var0", nb->var0},
                           {"mean1", nb->mean1},
                           {"var1", nb->var1}};
        } else if (const auto* forest = std::get_if<detail::ForestParams>(&params_)) {
            nlohmann::json trees = nlohmann::json::array();
            for (const auto& tree : forest->trees) {
                nlohmann::json nodes = nlohmann::json::array();
                for (const auto& n : tree)
                    nodes.push_back({{"f", n.feature},
                                     {"t", n.threshold},
                                     {"l", n.left},
                                     {"r", n.right},
                                     {"p", n.p1}});
                trees.push_back(nodes);
            }
            j["params"] = {{"trees", trees}};
        }
        return j;
    }

    static TrainedClassifier from_json(const nlohmann::json& j) {
        TrainedClassifier model;
        model.kind_ = model_kind_from_string(j.at("kind").get<std::string>());
        model.seed_ = j.at("seed").get<std::uint32_t>();
        model.schema_ = j.at("feature_schema").get<std::vector<std::string>>();
        model.standardizer_.means = j.at("standardizer").at("means").get<std::vector<double>>();
        model.standardizer_.scales = j.at("standardizer").at("scales").get<std::vector<double>>();
        const auto& p = j.at("params");
        if (model.kind_ == ModelKind::LogisticRegression || model.kind_ == ModelKind::LinearSvm) {
            detail::LinearParams lin;
            lin.weights = p.at("weights").get<std::vector<double>>();
            lin.bias = p.at("bias").get<double>();
            model.params_ = std::move(lin);
        } else if (model.kind_ == ModelKind::NaiveBayes) {
            detail::GaussianNbParams nb;
            nb.prior1 = p.at("prior1").get<double>();
            nb.mean0 = p.at("mean0").get<std::vector<double>>();
            nb.var0 = p.at("var0").get<std::vector<double>>();
            nb.mean1 = p.at("mean1").get<std::vector<double>>();
            nb.var1 = p.at("var1").get<std::vector<double>>();
            model.params_ = std::move(nb);
        } else {
            detail::ForestParams forest;
            for (const auto& tj : p.at("trees")) {
                detail::Tree tree;
                for (const auto& nj : tj) {
                    detail::TreeNode n;
                    n.feature = nj.at("f").get<int>();
                    n.threshold = nj.at("t").get<double>();
                    n.left = nj.at("l").get<int>();
                    n.right = nj.at("r").get<int>();
                    n.p1 = nj.at("p").get<double>();
                    tree.push_back(n);
                }
                forest.trees.push_back(std::move(tree));
            }
            model.params_ = std::move(forest);
        }
        return model;
    }

private:
    static detail::LinearParams train_logistic(const std::vector<std::vector<double>>& x,
                                               const std::vector<int>& y, const TrainConfig& config) {
        std::size_t n = x.size(), d = x.front().size();
        detail::LinearParams p;
        p.weights.assign(d, 0.0);
        double lambda = 1.0 / (config.c * static_cast<double>(n));
        for (int epoch = 0; epoch < config.epochs; ++epoch) {
            std::vector<double> grad(d, 0.0);
            double grad_bias = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double yi = y[i] == 1 ? 1.0 : -1.0;
                double z = p.margin(x[i]);
                double g = -yi * detail::sigmoid(-yi * z);
                for (std::size_t j = 0; j < d; ++j) grad[j] += g * x[i][j];
                grad_bias += g;
            }
            for (std::size_t j = 0; j < d; ++j) {
                grad[j] = grad[j] / static_cast<double>(n) + lambda * p.weights[j];
                p.weights[j] -= config.learning_rate * grad[j];
            }
            p.bias -= config.learning_rate * grad_bias / static_cast<double>(n);
        }
        return p;
    }

    static detail::LinearParams train_svm(const std::vector<std::vector<double>>& x,
                                          const std::vector<int>& y, const TrainConfig& config) {
        std::size_t n = x.size(), d = x.front().size();
        detail::LinearParams p;
        p.weights.assign(d, 0.0);
        double lambda = 1.0 / (config.c * static_cast<double>(n));
        for (int epoch = 0; epoch < config.epochs; ++epoch) {
            double lr = config.learning_rate / (1.0 + 0.005 * static_cast<double>(epoch));
            std::vector<double> grad(d, 0.0);
            double grad_bias = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double yi = y[i] == 1 ? 1.0 : -1.0;
                if (yi * p.margin(x[i]) < 1.0) {
                    for (std::size_t j = 0; j < d; ++j) grad[j] -= yi * x[i][j];
                    grad_bias -= yi;
                }
            }
            for (std::size_t j = 0; j < d; ++j) {
                grad[j] = grad[j] / static_cast<double>(n) + lambda * p.weights[j];
                p.weights[j] -= lr * grad[j];
            }
            p.bias -= lr * grad_bias / static_cast<double>(n);
        }
        return p;
    }

    static detail::GaussianNbParams train_nb(const std::vector<std::vector<double>>& x,
                                             const std::vector<int>& y) {
        std::size_t n = x.size(), d = x.front().size();
        detail::GaussianNbParams p;
        double n1 = 0;
        for (int yi : y) n1 += yi;
        p.prior1 = n1 / static_cast<double>(n);
        p.mean0.assign(d, 0.0);
        p.mean1.assign(d, 0.0);
        p.var0.assign(d, 0.0);
        p.var1.assign(d, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& mean = y[i] == 1 ? p.mean1 : p.mean0;
            for (std::size_t j = 0; j < d; ++j) mean[j] += x[i][j];
        }
        double n0 = static_cast<double>(n) - n1;
        for (std::size_t j = 0; j < d; ++j) {
            p.mean0[j] /= n0;
            p.mean1[j] /= n1;
        }
        for (std::size_t i = 0; i < n; ++i) {
            auto& var = y[i] == 1 ? p.var1 : p.var0;
            const auto& mean = y[i] == 1 ? p.mean1 : p.mean0;
            for (std::size_t j = 0; j < d; ++j) {
                double delta = x[i][j] - mean[j];
                var[j] += delta * delta;
            }
        }
        double max_var = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            p.var0[j] /= n0;
            p.var1[j] /= n1;
            max_var = std::max({max_var, p.var0[j], p.var1[j]});
        }
        double eps = 1e-9 * std::max(max_var, 1.0);
        for (std::size_t j = 0; j < d; ++j) {
            p.var0[j] += eps;
            p.var1[j] += eps;
        }
        return p;
    }

    static detail::ForestParams train_forest(const std::vector<std::vector<double>>& x,
                                             const std::vector<int>& y, const TrainConfig& config) {
        detail::ForestParams forest;
        std::mt19937 master(config.seed);
        std::vector<std::uint32_t> tree_seeds;
        tree_seeds.reserve(static_cast<std::size_t>(config.trees));
        for (int t = 0; t < config.trees; ++t) tree_seeds.push_back(master());
        std::size_t n = x.size();
        for (int t = 0; t < config.trees; ++t) {
            std::mt19937 rng(tree_seeds[static_cast<std::size_t>(t)]);
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            std::vector<std::size_t> sample;
            sample.reserve(n);
            for (std::size_t i = 0; i < n; ++i) sample.push_back(pick(rng));
            detail::TreeBuilder builder(x, y, config.max_depth, config.min_leaf, rng);
            forest.trees.push_back(builder.build(sample));
        }
        return forest;
    }

    double score_row(const std::vector<double>& x) const {
        if (const auto* lin = std::get_if<detail::LinearParams>(&params_)) {
            double z = lin->margin(x);
            return kind_ == ModelKind::LinearSvm ? z : detail::sigmoid(z);
        }
        if (const auto* nb = std::get_if<detail::GaussianNbParams>(&params_)) {
            auto log_likelihood = [&](const std::vector<double>& mean, const std::vector<double>& var) {
                double ll = 0.0;
                for (std::size_t j = 0; j < x.size(); ++j) {
                    double delta = x[j] - mean[j];
                    ll += -0.5 * std::log(2.0 * std::numbers::pi * var[j]) -
                          delta * delta / (2.0 * var[j]);
                }
                return ll;
            };
            double l1 = std::log(nb->prior1) + log_likelihood(nb->mean1, nb->var1);
            double l0 = std::log(1.0 - nb->prior1) + log_likelihood(nb->mean0, nb->var0);
            double m = std::max(l0, l1);
            double e0 = std::exp(l0 - m), e1 = std::exp(l1 - m);
            return e1 / (e0 + e1);
        }
        const auto& forest = std::get<detail::ForestParams>(params_);
        double votes = 0.0;
        for (const auto& tree : forest.trees)
            if (detail::tree_predict(tree, x) > 0.5) votes += 1.0;
        return votes / static_cast<double>(forest.trees.size());
    }

    ModelKind kind_ = ModelKind::RandomForest;
    std::uint32_t seed_ = 42;
    std::vector<std::string> schema_;
    Standardizer standardizer_;
    std::variant<detail::LinearParams, detail::GaussianNbParams, detail::ForestParams> params_;
};

// Convenience wrapper over a feature table with column selection.
inline TrainedClassifier train_on_table(const FeatureTable& table,
                                        const std::vector<std::string>& feature_names,
                                        const TrainConfig& config) {
    std::vector<std::size_t> cols;
    cols.reserve(feature_names.size());
    for (const auto& name : feature_names) cols.push_back(table.column(name));
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (const auto& row : table.rows) {
        if (!row.label) throw Error("training rows must be labeled");
        std::vector<double> r;
        r.reserve(cols.size());
        for (std::size_t c : cols) r.push_back(row.values[c]);
        x.push_back(std::move(r));
        y.push_back(*row.label);
    }
    return TrainedClassifier::train(x, y, feature_names, config);
}

}  // namespace prereqx
