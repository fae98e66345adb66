#pragma once

// Evaluation: stratified k-fold splitting, precision/recall/F1, area under
// the precision-recall curve, and the cross-validated statistical and
// supervised experiment drivers with JSON reports.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "prereqx/classify.hpp"
#include "prereqx/pipeline.hpp"
#include "prereqx/wiki_features.hpp"

namespace prereqx {

struct FoldSplit {
    std::size_t k = 5;
    std::vector<std::size_t> assignments;  // index -> fold id
    std::uint32_t seed = 42;

    std::vector<std::size_t> test_indices(std::size_t fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignments.size(); ++i)
            if (assignments[i] == fold) out.push_back(i);
        return out;
    }

    std::vector<std::size_t> train_indices(std::size_t fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignments.size(); ++i)
            if (assignments[i] != fold) out.push_back(i);
        return out;
    }
};

// Stratified shuffled partition: positives and negatives are shuffled
// separately and dealt round-robin, so per-fold positive counts differ by at
// most one. Deterministic per seed.
inline FoldSplit kfold_split(const std::vector<int>& labels, std::size_t k = 5,
                             std::uint32_t seed = 42, bool stratified = true) {
    if (labels.size() < k) throw Error("fewer pairs than folds");
    if (k < 2) throw Error("k must be at least 2");
    FoldSplit split;
    split.k = k;
    split.seed = seed;
    split.assignments.assign(labels.size(), 0);
    std::mt19937 rng(seed);

    auto shuffle_indices = [&](std::vector<std::size_t>& idx) {
        for (std::size_t i = idx.size(); i > 1; --i) {
            std::uniform_int_distribution<std::size_t> pick(0, i - 1);
            std::swap(idx[i - 1], idx[pick(rng)]);
        }
    };

    if (stratified) {
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(i);
        shuffle_indices(pos);
        shuffle_indices(neg);
        for (std::size_t j = 0; j < pos.size(); ++j) split.assignments[pos[j]] = j % k;
        // negatives start where the positive remainder left off, evening out fold sizes
        for (std::size_t j = 0; j < neg.size(); ++j) split.assignments[neg[j]] = (j + pos.size()) % k;
    } else {
        std::vector<std::size_t> idx(labels.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        shuffle_indices(idx);
        for (std::size_t j = 0; j < idx.size(); ++j) split.assignments[idx[j]] = j % k;
    }
    return split;
}

struct PrfMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

inline PrfMetrics prf(const std::vector<int>& predictions, const std::vector<int>& labels) {
    if (predictions.size() != labels.size()) throw Error("predictions and labels differ in length");
    if (predictions.empty()) throw Error("prf requires at least one pair");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i] == 1 && labels[i] == 1) ++tp;
        else if (predictions[i] == 1 && labels[i] == 0) ++fp;
        else if (predictions[i] == 0 && labels[i] == 1) ++fn;
    }
    PrfMetrics m;
    m.precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

struct PrCurvePoint {
    double recall = 0.0;
    double precision = 0.0;
};

// Precision/recall after each prefix of the score-descending ranking; ties
// keep stable input order.
inline std::vector<PrCurvePoint> pr_curve(const std::vector<double>& scores,
                                          const std::vector<int>& labels) {
    if (scores.size() != labels.size()) throw Error("scores and labels differ in length");
    std::size_t positives = 0;
    for (int y : labels) positives += y == 1;
    if (positives == 0) throw Error("pr curve requires at least one positive label");
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::vector<PrCurvePoint> points;
    points.reserve(order.size());
    double tp = 0, predicted = 0;
    for (std::size_t i : order) {
        predicted += 1.0;
        if (labels[i] == 1) tp += 1.0;
        points.push_back({tp / static_cast<double>(positives), tp / predicted});
    }
    return points;
}

// Area under the precision-recall curve: the step-wise sum of
// precision * recall-increment along the ranking, anchored at recall zero.
inline double auprc(const std::vector<double>& scores, const std::vector<int>& labels) {
    auto points = pr_curve(scores, labels);
    double area = 0.0;
    double prev_recall = 0.0;
    for (const auto& p : points) {
        area += (p.recall - prev_recall) * p.precision;
        prev_recall = p.recall;
    }
    return area;
}

// Per-method evaluation block shared by the statistical and baseline runs.
struct MethodEval {
    std::string name;
    std::vector<PrfMetrics> per_fold;
    PrfMetrics averaged;              // macro average over folds
    double auprc_pooled = 0.0;        // single ranking over all labeled pairs
    double auprc_fold_mean = 0.0;
    std::vector<double> fold_thetas;
    double theta_mean = 0.0;
    double theta_full = 0.0;          // tuned on all pairs, no cross-validation
    std::vector<PrCurvePoint> curve;  // pooled ranking curve
};

// Tunes theta per fold on the training pairs, classifies the test fold, and
// averages the fold metrics. AUPRC is threshold-free and pooled over all
// pairs; a per-fold mean is also reported.
inline MethodEval evaluate_thresholded_scores(const std::string& name,
                                              const std::vector<double>& scores,
                                              const std::vector<int>& labels,
                                              const FoldSplit& split) {
    MethodEval eval;
    eval.name = name;
    for (std::size_t fold = 0; fold < split.k; ++fold) {
        std::vector<ScoredPair> train;
        for (std::size_t i : split.train_indices(fold)) train.push_back({scores[i], labels[i]});
        ThresholdModel model = tune_theta(train);
        eval.fold_thetas.push_back(model.theta);

        auto test = split.test_indices(fold);
        std::vector<int> predictions, test_labels;
        std::vector<double> test_scores;
        for (std::size_t i : test) {
            predictions.push_back(stat_classify(scores[i], model));
            test_labels.push_back(labels[i]);
            test_scores.push_back(scores[i]);
        }
        PrfMetrics fold_metrics = prf(predictions, test_labels);
        eval.per_fold.push_back(fold_metrics);
        eval.averaged.precision += fold_metrics.precision;
        eval.averaged.recall += fold_metrics.recall;
        eval.averaged.f1 += fold_metrics.f1;
        bool has_positive = std::find(test_labels.begin(), test_labels.end(), 1) != test_labels.end();
        eval.auprc_fold_mean += has_positive ? auprc(test_scores, test_labels) : 0.0;
    }
    double k = static_cast<double>(split.k);
    eval.averaged.precision /= k;
    eval.averaged.recall /= k;
    eval.averaged.f1 /= k;
    eval.auprc_fold_mean /= k;
    for (double t : eval.fold_thetas) eval.theta_mean += t;
    eval.theta_mean /= k;

    std::vector<ScoredPair> all;
    for (std::size_t i = 0; i < scores.size(); ++i) all.push_back({scores[i], labels[i]});
    eval.theta_full = tune_theta(all).theta;
    eval.auprc_pooled = auprc(scores, labels);
    eval.curve = pr_curve(scores, labels);
    return eval;
}

struct StatOptions {
    bool ordering = true;
    ClosureMode closure = ClosureMode::Fixpoint;
    std::size_t k = 5;
    std::uint32_t seed = 42;
    bool stratified = true;
    bool with_refd = true;  // evaluate RefD baselines when the link graph is present
};

struct StatReport {
    MethodEval proposed;
    std::optional<MethodEval> refd_equal;
    std::optional<MethodEval> refd_tfidf;
    StatOptions options;
};

// Full statistical experiment: pipeline scores for every labeled pair,
// per-fold theta tuning, and the RefD baselines on the same folds.
inline StatReport run_statistical(const LoadedCorpus& corpus, const StatOptions& options = {}) {
    if (corpus.pairs.empty()) throw Error("statistical evaluation requires labeled pairs");
    StatReport report;
    report.options = options;

    PipelineOptions popt;
    popt.ordering = options.ordering;
    popt.closure = options.closure;
    PipelineResult pipeline = build_pipeline(corpus, popt);

    std::vector<double> scores = pair_scores(pipeline.final_matrix, corpus.pairs);
    std::vector<int> labels;
    labels.reserve(corpus.pairs.size());
    for (const auto& p : corpus.pairs) labels.push_back(p.label);

    FoldSplit split = kfold_split(labels, options.k, options.seed, options.stratified);
    report.proposed = evaluate_thresholded_scores("proposed_statistical", scores, labels, split);

    if (options.with_refd && corpus.links.edge_count() > 0) {
        std::vector<std::string> ids = corpus.concepts.ids();
        LinkGraphView graph(ids, corpus.links);

        std::vector<TokenSeq> phrases, page_docs;
        for (const auto& id : ids) {
            phrases.push_back(tokenize(id));
            auto it = corpus.wiki.find(id);
            page_docs.push_back(
                it == corpus.wiki.end()
                    ? TokenSeq{}
                    : tokenize(normalize_text(it->second.text, corpus.synonyms)));
        }
        ConceptTfidf page_tfidf(phrases, page_docs);

        std::vector<double> equal_scores, tfidf_scores;
        for (const auto& p : corpus.pairs) {
            equal_scores.push_back(refd(p.target, p.candidate, graph, RefdWeighting::Equal));
            tfidf_scores.push_back(
                refd(p.target, p.candidate, graph, RefdWeighting::Tfidf, &page_tfidf));
        }
        report.refd_equal = evaluate_thresholded_scores("refd_equal", equal_scores, labels, split);
        report.refd_tfidf = evaluate_thresholded_scores("refd_tfidf", tfidf_scores, labels, split);
    }
    return report;
}

enum class FeatureSet { Gtc, Proposed, BookOnly };

inline std::string to_string(FeatureSet set) {
    switch (set) {
        case FeatureSet::Gtc: return "gtc";
        case FeatureSet::Proposed: return "proposed";
        case FeatureSet::BookOnly: return "book-only";
    }
    return "?";
}

inline FeatureSet feature_set_from_string(const std::string& s) {
    if (s == "gtc") return FeatureSet::Gtc;
    if (s == "proposed") return FeatureSet::Proposed;
    if (s == "book-only" || s == "book_only") return FeatureSet::BookOnly;
    throw Error("unknown feature set '" + s + "'");
}

// Columns of the table belonging to the requested set, in schema order.
inline std::vector<std::string> select_feature_names(const FeatureTable& table, FeatureSet set) {
    auto has = [&](const std::string& name) {
        return std::find(table.schema.begin(), table.schema.end(), name) != table.schema.end();
    };
    std::vector<std::string> proposed = proposed_feature_names();
    auto is_proposed = [&](const std::string& name) {
        return std::find(proposed.begin(), proposed.end(), name) != proposed.end();
    };
    std::vector<std::string> out;
    for (const auto& name : table.schema) {
        bool prop = is_proposed(name);
        if (set == FeatureSet::Gtc && prop) continue;
        if (set == FeatureSet::BookOnly && !prop) continue;
        out.push_back(name);
    }
    if (set != FeatureSet::Gtc)
        for (const auto& name : proposed)
            if (!has(name)) throw Error("feature table lacks '" + name + "'");
    return out;
}

struct SupervisedCell {
    FeatureSet set = FeatureSet::Proposed;
    ModelKind kind = ModelKind::RandomForest;
    std::vector<PrfMetrics> per_fold;
    PrfMetrics averaged;
    double auprc_pooled = 0.0;
};

struct SupervisedOptions {
    std::vector<ModelKind> models = {ModelKind::RandomForest, ModelKind::LinearSvm,
                                     ModelKind::LogisticRegression, ModelKind::NaiveBayes};
    std::vector<FeatureSet> sets = {FeatureSet::Gtc, FeatureSet::Proposed};
    std::size_t k = 5;
    std::uint32_t seed = 42;
    bool stratified = true;
    TrainConfig base_config;  // kind/seed overwritten per cell
};

struct SupervisedReport {
    std::vector<SupervisedCell> cells;
    SupervisedOptions options;
};

// Cross-validated supervised comparison over model kinds and feature sets.
inline SupervisedReport run_supervised(const FeatureTable& table, const SupervisedOptions& options = {}) {
    if (table.rows.empty()) throw Error("supervised evaluation requires feature rows");
    std::vector<int> labels;
    for (const auto& row : table.rows) {
        if (!row.label) throw Error("supervised evaluation requires labeled rows");
        labels.push_back(*row.label);
    }
    FoldSplit split = kfold_split(labels, options.k, options.seed, options.stratified);

    SupervisedReport report;
    report.options = options;
    for (FeatureSet set : options.sets) {
        std::vector<std::string> names = select_feature_names(table, set);
        std::vector<std::size_t> cols;
        for (const auto& n : names) cols.push_back(table.column(n));

        auto row_values = [&](std::size_t i) {
            std::vector<double> r;
            r.reserve(cols.size());
            for (std::size_t c : cols) r.push_back(table.rows[i].values[c]);
            return r;
        };

        for (ModelKind kind : options.models) {
            SupervisedCell cell;
            cell.set = set;
            cell.kind = kind;
            std::vector<double> pooled_scores(labels.size(), 0.0);
            for (std::size_t fold = 0; fold < split.k; ++fold) {
                std::vector<std::vector<double>> train_x, test_x;
                std::vector<int> train_y, test_y;
                for (std::size_t i : split.train_indices(fold)) {
                    train_x.push_back(row_values(i));
                    train_y.push_back(labels[i]);
                }
                auto test = split.test_indices(fold);
                for (std::size_t i : test) {
                    test_x.push_back(row_values(i));
                    test_y.push_back(labels[i]);
                }
                TrainConfig config = options.base_config;
                config.kind = kind;
                config.seed = options.seed + static_cast<std::uint32_t>(fold);
                TrainedClassifier model = TrainedClassifier::train(train_x, train_y, names, config);
                Predictions pred = model.predict(test_x, names);
                PrfMetrics fold_metrics = prf(pred.labels, test_y);
                cell.per_fold.push_back(fold_metrics);
                cell.averaged.precision += fold_metrics.precision;
                cell.averaged.recall += fold_metrics.recall;
                cell.averaged.f1 += fold_metrics.f1;
                for (std::size_t t = 0; t < test.size(); ++t) pooled_scores[test[t]] = pred.scores[t];
            }
            double k = static_cast<double>(split.k);
            cell.averaged.precision /= k;
            cell.averaged.recall /= k;
            cell.averaged.f1 /= k;
            cell.auprc_pooled = auprc(pooled_scores, labels);
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

// Published reference results for the three stock domains, used for
// side-by-side deltas in reports. P/R/F1 as fractions.
struct StatReference {
    PrfMetrics proposed;
    double proposed_auprc = 0.0;
    double proposed_theta = 0.0;
    PrfMetrics refd_equal;
    double refd_equal_auprc = 0.0;
    PrfMetrics refd_tfidf;
    double refd_tfidf_auprc = 0.0;
};

inline std::optional<StatReference> stat_reference(const std::string& domain) {
    auto m = [](double p, double r, double f) { return PrfMetrics{p / 100.0, r / 100.0, f / 100.0}; };
    if (domain == "geometry")
        return StatReference{m(62.2, 49.3, 54.9), 0.70, 0.06,
                             m(50.6, 71.5, 59.1), 0.60,
                             m(39.3, 80.1, 52.7), 0.38};
    if (domain == "physics")
        return StatReference{m(60.8, 58.5, 59.6), 0.69, 0.12,
                             m(42.1, 60.8, 49.7), 0.43,
                             m(32.2, 71.1, 44.2), 0.35};
    if (domain == "precalculus")
        return StatReference{m(68.6, 54.4, 60.4), 0.75, 0.04,
                             m(62.1, 82.4, 70.7), 0.73,
                             m(54.0, 73.4, 61.8), 0.61};
    return std::nullopt;
}

inline std::optional<PrfMetrics> supervised_reference(const std::string& domain, FeatureSet set,
                                                      ModelKind kind) {
    auto m = [](double p, double r, double f) { return PrfMetrics{p / 100.0, r / 100.0, f / 100.0}; };
    using K = ModelKind;
    std::map<std::string, std::map<int, std::map<int, PrfMetrics>>> table;
    auto fill = [&](const std::string& domain_name, FeatureSet s, K k, PrfMetrics v) {
        table[domain_name][static_cast<int>(s)][static_cast<int>(k)] = v;
    };
    fill("geometry", FeatureSet::Gtc, K::RandomForest, m(94.5, 85.8, 89.9));
    fill("geometry", FeatureSet::Gtc, K::LinearSvm, m(82.3, 66.3, 73.4));
    fill("geometry", FeatureSet::Gtc, K::LogisticRegression, m(84.2, 62.0, 71.4));
    fill("geometry", FeatureSet::Gtc, K::NaiveBayes, m(84.6, 44.7, 58.4));
    fill("geometry", FeatureSet::Proposed, K::RandomForest, m(94.4, 88.6, 91.4));
    fill("geometry", FeatureSet::Proposed, K::LinearSvm, m(83.6, 69.0, 75.5));
    fill("geometry", FeatureSet::Proposed, K::LogisticRegression, m(84.8, 64.7, 73.3));
    fill("geometry", FeatureSet::Proposed, K::NaiveBayes, m(84.8, 44.5, 58.3));
    fill("physics", FeatureSet::Gtc, K::RandomForest, m(82.6, 62.1, 70.8));
    fill("physics", FeatureSet::Gtc, K::LinearSvm, m(77.4, 52.1, 62.2));
    fill("physics", FeatureSet::Gtc, K::LogisticRegression, m(78.2, 48.3, 59.6));
    fill("physics", FeatureSet::Gtc, K::NaiveBayes, m(54.0, 72.4, 61.6));
    fill("physics", FeatureSet::Proposed, K::RandomForest, m(85.4, 66.1, 74.4));
    fill("physics", FeatureSet::Proposed, K::LinearSvm, m(77.5, 55.5, 64.6));
    fill("physics", FeatureSet::Proposed, K::LogisticRegression, m(76.8, 52.5, 62.2));
    fill("physics", FeatureSet::Proposed, K::NaiveBayes, m(59.7, 72.3, 65.2));
    fill("precalculus", FeatureSet::Gtc, K::RandomForest, m(89.8, 90.1, 89.9));
    fill("precalculus", FeatureSet::Gtc, K::LinearSvm, m(88.6, 86.1, 87.2));
    fill("precalculus", FeatureSet::Gtc, K::LogisticRegression, m(86.2, 81.9, 83.9));
    fill("precalculus", FeatureSet::Gtc, K::NaiveBayes, m(81.1, 78.1, 79.2));
    fill("precalculus", FeatureSet::Proposed, K::RandomForest, m(90.9, 90.3, 90.5));
    fill("precalculus", FeatureSet::Proposed, K::LinearSvm, m(89.0, 87.5, 88.2));
    fill("precalculus", FeatureSet::Proposed, K::LogisticRegression, m(85.9, 83.2, 84.4));
    fill("precalculus", FeatureSet::Proposed, K::NaiveBayes, m(81.1, 76.3, 78.3));

    auto d = table.find(domain);
    if (d == table.end()) return std::nullopt;
    auto s = d->second.find(static_cast<int>(set));
    if (s == d->second.end()) return std::nullopt;
    auto k = s->second.find(static_cast<int>(kind));
    if (k == s->second.end()) return std::nullopt;
    return k->second;
}

inline nlohmann::json prf_to_json(const PrfMetrics& m) {
    return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

inline nlohmann::json method_eval_to_json(const MethodEval& eval) {
    nlohmann::json folds = nlohmann::json::array();
    for (const auto& f : eval.per_fold) folds.push_back(prf_to_json(f));
    nlohmann::json j = {{"name", eval.name},
                        {"precision", eval.averaged.precision},
                        {"recall", eval.averaged.recall},
                        {"f1", eval.averaged.f1},
                        {"auprc", eval.auprc_pooled},
                        {"auprc_fold_mean", eval.auprc_fold_mean},
                        {"per_fold", folds},
                        {"theta_per_fold", eval.fold_thetas},
                        {"theta_mean", eval.theta_mean},
                        {"theta_full", eval.theta_full}};
    return j;
}

inline nlohmann::json stat_report_to_json(const StatReport& report,
                                          const std::optional<std::string>& domain = {}) {
    nlohmann::json j;
    j["kind"] = "statistical";
    j["config"] = {{"ordering", report.options.ordering},
                   {"closure", report.options.closure == ClosureMode::Fixpoint ? "fixpoint" : "single-pass"},
                   {"k_folds", report.options.k},
                   {"seed", report.options.seed},
                   {"stratified", report.options.stratified}};
    j["methods"] = nlohmann::json::array();
    j["methods"].push_back(method_eval_to_json(report.proposed));
    if (report.refd_equal) j["methods"].push_back(method_eval_to_json(*report.refd_equal));
    if (report.refd_tfidf) j["methods"].push_back(method_eval_to_json(*report.refd_tfidf));

    if (domain) {
        j["domain"] = *domain;
        auto ref = stat_reference(*domain);
        if (ref) {
            auto block = [&](const PrfMetrics& r, double auprc_ref, const MethodEval& got,
                             std::optional<double> theta_ref) {
                nlohmann::json b = {{"reference", prf_to_json(r)},
                                    {"reference_auprc", auprc_ref},
                                    {"delta_f1", got.averaged.f1 - r.f1},
                                    {"delta_precision", got.averaged.precision - r.precision},
                                    {"delta_recall", got.averaged.recall - r.recall},
                                    {"delta_auprc", got.auprc_pooled - auprc_ref}};
                if (theta_ref) {
                    b["reference_theta"] = *theta_ref;
                    b["delta_theta"] = got.theta_full - *theta_ref;
                }
                return b;
            };
            j["reference_comparison"]["proposed_statistical"] =
                block(ref->proposed, ref->proposed_auprc, report.proposed, ref->proposed_theta);
            if (report.refd_equal)
                j["reference_comparison"]["refd_equal"] =
                    block(ref->refd_equal, ref->refd_equal_auprc, *report.refd_equal, {});
            if (report.refd_tfidf)
                j["reference_comparison"]["refd_tfidf"] =
                    block(ref->refd_tfidf, ref->refd_tfidf_auprc, *report.refd_tfidf, {});
        }
    }
    return j;
}

inline nlohmann::json supervised_report_to_json(const SupervisedReport& report,
                                                const std::optional<std::string>& domain = {}) {
    nlohmann::json j;
    j["kind"] = "supervised";
    j["config"] = {{"k_folds", report.options.k},
                   {"seed", report.options.seed},
                   {"stratified", report.options.stratified},
                   {"trees", report.options.base_config.trees},
                   {"c", report.options.base_config.c},
                   {"learning_rate", report.options.base_config.learning_rate},
                   {"epochs", report.options.base_config.epochs}};
    j["cells"] = nlohmann::json::array();
    for (const auto& cell : report.cells) {
        nlohmann::json folds = nlohmann::json::array();
        for (const auto& f : cell.per_fold) folds.push_back(prf_to_json(f));
        nlohmann::json c = {{"feature_set", to_string(cell.set)},
                            {"model", to_string(cell.kind)},
                            {"precision", cell.averaged.precision},
                            {"recall", cell.averaged.recall},
                            {"f1", cell.averaged.f1},
                            {"auprc", cell.auprc_pooled},
                            {"per_fold", folds}};
        if (domain) {
            auto ref = supervised_reference(*domain, cell.set, cell.kind);
            if (ref) {
                c["reference"] = prf_to_json(*ref);
                c["delta_f1"] = cell.averaged.f1 - ref->f1;
                c["delta_precision"] = cell.averaged.precision - ref->precision;
                c["delta_recall"] = cell.averaged.recall - ref->recall;
            }
        }
        j["cells"].push_back(c);
    }
    if (domain) j["domain"] = *domain;
    return j;
}

}  // namespace prereqx
