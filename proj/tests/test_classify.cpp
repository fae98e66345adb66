#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "prereqx/classify.hpp"
#include "test_helpers.hpp"

using namespace prereqx;
using test_helpers::near;

TEST_CASE("stat_classify uses a strict threshold") {
    CHECK(stat_classify(0.07, ThresholdModel{0.06}) == 1);
    CHECK(stat_classify(0.0, ThresholdModel{0.0}) == 0);
    CHECK(stat_classify(0.0, ThresholdModel{0.5}) == 0);
    CHECK(stat_classify(0.06, ThresholdModel{0.06}) == 0);  // boundary excluded
}

TEST_CASE("stat_classify is monotone in the score") {
    ThresholdModel model{0.3};
    int prev = 0;
    for (double omega = 0.0; omega <= 1.0; omega += 0.01) {
        int cur = stat_classify(omega, model);
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("theta grid has 51 points from 0 to 1") {
    auto grid = theta_grid();
    REQUIRE(grid.size() == 51);
    CHECK(grid.front() == 0.0);
    CHECK(near(grid.back(), 1.0));
    CHECK(near(grid[3], 0.06));
}

TEST_CASE("tune_theta picks the smallest argmax theta") {
    SECTION("clean separation: the first separating grid point wins") {
        std::vector<ScoredPair> pairs;
        for (int i = 0; i < 5; ++i) pairs.push_back({0.5, 1});
        for (int i = 0; i < 5; ++i) pairs.push_back({0.01, 0});
        // any theta in [0.02, 0.48] reaches F1=1; the tie-break returns 0.02
        CHECK(near(tune_theta(pairs).theta, 0.02));
    }

    SECTION("all scores zero: F1 is zero everywhere, returns 0.0") {
        std::vector<ScoredPair> pairs = {{0.0, 1}, {0.0, 0}, {0.0, 1}};
        CHECK(tune_theta(pairs).theta == 0.0);
    }

    SECTION("no positives is an error") {
        std::vector<ScoredPair> pairs = {{0.4, 0}, {0.2, 0}};
        CHECK_THROWS_AS(tune_theta(pairs), Error);
    }

    SECTION("returned theta maximizes F1 over the grid") {
        std::mt19937 rng(61);
        std::uniform_real_distribution<double> score(0.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<ScoredPair> pairs;
            bool any_pos = false;
            for (int i = 0; i < 30; ++i) {
                int label = rng() % 3 == 0 ? 1 : 0;
                any_pos = any_pos || label == 1;
                pairs.push_back({score(rng), label});
            }
            if (!any_pos) pairs.push_back({score(rng), 1});
            ThresholdModel model = tune_theta(pairs);
            double got = f1_at_threshold(pairs, model.theta);
            for (double theta : theta_grid()) {
                double f1 = f1_at_threshold(pairs, theta);
                CHECK(got >= f1);
                if (f1 == got) CHECK(model.theta <= theta + 1e-12);
            }
        }
    }
}

namespace {

// linearly separable toy set in two features
void separable_set(std::vector<std::vector<double>>& x, std::vector<int>& y, std::mt19937& rng,
                   int per_class = 30) {
    std::normal_distribution<double> noise(0.0, 0.3);
    for (int i = 0; i < per_class; ++i) {
        x.push_back({2.0 + noise(rng), 2.0 + noise(rng)});
        y.push_back(1);
        x.push_back({-2.0 + noise(rng), -2.0 + noise(rng)});
        y.push_back(0);
    }
}

const std::vector<std::string> kXYSchema = {"f0", "f1"};

}  // namespace

TEST_CASE("logistic regression separates a separable toy set") {
    std::mt19937 rng(67);
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    separable_set(x, y, rng);
    TrainConfig config;
    config.kind = ModelKind::LogisticRegression;
    TrainedClassifier model = TrainedClassifier::train(x, y, kXYSchema, config);
    Predictions pred = model.predict(x, kXYSchema);
    int correct = 0;
    for (std::size_t i = 0; i < y.size(); ++i) correct += pred.labels[i] == y[i];
    CHECK(static_cast<double>(correct) / static_cast<double>(y.size()) >= 0.95);
}

TEST_CASE("linear svm separates a separable toy set") {
    std::mt19937 rng(71);
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    separable_set(x, y, rng);
    TrainConfig config;
    config.kind = ModelKind::LinearSvm;
    TrainedClassifier model = TrainedClassifier::train(x, y, kXYSchema, config);
    Predictions pred = model.predict(x, kXYSchema);
    int correct = 0;
    for (std::size_t i = 0; i < y.size(); ++i) correct += pred.labels[i] == y[i];
    CHECK(static_cast<double>(correct) / static_cast<double>(y.size()) >= 0.95);
}

TEST_CASE("naive bayes predicts the majority class on uninformative features") {
    std::mt19937 rng(73);
    std::uniform_real_distribution<double> feature(-0.05, 0.05);
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (int i = 0; i < 100; ++i) {
        x.push_back({feature(rng), feature(rng)});
        y.push_back(i < 90 ? 1 : 0);  // 90% positive
    }
    TrainConfig config;
    config.kind = ModelKind::NaiveBayes;
    TrainedClassifier model = TrainedClassifier::train(x, y, kXYSchema, config);
    Predictions pred = model.predict(x, kXYSchema);
    int ones = 0;
    for (int label : pred.labels) ones += label;
    CHECK(ones >= 95);  // prior dominates nearly everywhere
}

TEST_CASE("random forest is deterministic for a fixed seed and memorizes small sets") {
    std::mt19937 rng(79);
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    separable_set(x, y, rng, 15);
    TrainConfig config;
    config.kind = ModelKind::RandomForest;
    config.seed = 123;

    TrainedClassifier a = TrainedClassifier::train(x, y, kXYSchema, config);
    TrainedClassifier b = TrainedClassifier::train(x, y, kXYSchema, config);
    std::vector<std::vector<double>> held_out = {{1.5, 1.8}, {-1.2, -2.2}, {0.3, 0.1}, {2.5, 2.5}};
    Predictions pa = a.predict(held_out, kXYSchema);
    Predictions pb = b.predict(held_out, kXYSchema);
    for (std::size_t i = 0; i < held_out.size(); ++i) {
        CHECK(pa.labels[i] == pb.labels[i]);
        CHECK(pa.scores[i] == pb.scores[i]);
    }

    // training rows of a cleanly separable fixture come back with their labels
    Predictions on_train = a.predict(x, kXYSchema);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(on_train.labels[i] == y[i]);

    TrainConfig other = config;
    other.seed = 124;
    TrainedClassifier c = TrainedClassifier::train(x, y, kXYSchema, other);
    // different seed is allowed to differ; scores stay in [0, 1]
    Predictions pc = c.predict(held_out, kXYSchema);
    for (double s : pc.scores) {
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
    }
}

TEST_CASE("score and label are consistent per model kind") {
    std::mt19937 rng(83);
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    separable_set(x, y, rng, 20);
    std::vector<std::vector<double>> probe;
    std::uniform_real_distribution<double> v(-3.0, 3.0);
    for (int i = 0; i < 40; ++i) probe.push_back({v(rng), v(rng)});

    for (ModelKind kind : {ModelKind::LogisticRegression, ModelKind::NaiveBayes,
                           ModelKind::RandomForest, ModelKind::LinearSvm}) {
        TrainConfig config;
        config.kind = kind;
        TrainedClassifier model = TrainedClassifier::train(x, y, kXYSchema, config);
        Predictions pred = model.predict(probe, kXYSchema);
        for (std::size_t i = 0; i < probe.size(); ++i) {
            if (kind == ModelKind::LinearSvm)
                CHECK(pred.labels[i] == (pred.scores[i] > 0.0 ? 1 : 0));
            else
                CHECK(pred.labels[i] == (pred.scores[i] > 0.5 ? 1 : 0));
        }
        CHECK(model.predict({}, kXYSchema).labels.empty());
    }
}

TEST_CASE("training rejects degenerate inputs") {
    TrainConfig config;
    CHECK_THROWS_AS(TrainedClassifier::train({}, {}, kXYSchema, config), Error);
    CHECK_THROWS_AS(TrainedClassifier::train({{1.0, 2.0}}, {1}, kXYSchema, config), Error);
    CHECK_THROWS_AS(
        TrainedClassifier::train({{1.0, 2.0}, {2.0, 1.0}}, {1, 1}, kXYSchema, config), Error);
}

TEST_CASE("prediction rejects a mismatched schema") {
    std::mt19937 rng(89);
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    separable_set(x, y, rng, 5);
    TrainConfig config;
    config.kind = ModelKind::LogisticRegression;
    TrainedClassifier model = TrainedClassifier::train(x, y, kXYSchema, config);
    CHECK_THROWS_AS(model.predict(x, {"other", "names"}), Error);
}

TEST_CASE("standardization statistics come from training rows only") {
    std::vector<std::vector<double>> train = {{0.0, 10.0}, {2.0, 14.0}, {4.0, 18.0}, {6.0, 22.0}};
    std::vector<int> labels = {0, 0, 1, 1};
    TrainConfig config;
    config.kind = ModelKind::LogisticRegression;
    TrainedClassifier model = TrainedClassifier::train(train, labels, kXYSchema, config);
    const Standardizer& s = model.standardizer();
    CHECK(near(s.means[0], 3.0));
    CHECK(near(s.means[1], 16.0));
    // population standard deviations of the training columns
    CHECK(near(s.scales[0], std::sqrt(5.0)));
    CHECK(near(s.scales[1], std::sqrt(20.0)));
    // predicting on very different rows must not alter the stored statistics
    model.predict({{100.0, -100.0}}, kXYSchema);
    CHECK(near(model.standardizer().means[0], 3.0));
}

TEST_CASE("model json round-trips to identical predictions") {
    std::mt19937 rng(97);
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    separable_set(x, y, rng, 10);
    std::vector<std::vector<double>> probe = {{0.5, 0.5}, {-0.5, -1.0}, {2.2, 1.9}};

    for (ModelKind kind : {ModelKind::LogisticRegression, ModelKind::LinearSvm,
                           ModelKind::NaiveBayes, ModelKind::RandomForest}) {
        TrainConfig config;
        config.kind = kind;
        config.trees = 25;
        TrainedClassifier model = TrainedClassifier::train(x, y, kXYSchema, config);
        TrainedClassifier reloaded = TrainedClassifier::from_json(model.to_json());
        Predictions p1 = model.predict(probe, kXYSchema);
        Predictions p2 = reloaded.predict(probe, kXYSchema);
        for (std::size_t i = 0; i < probe.size(); ++i) {
            CHECK(p1.labels[i] == p2.labels[i]);
            CHECK(p1.scores[i] == p2.scores[i]);
        }
    }
}
