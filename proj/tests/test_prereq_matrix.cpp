#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "prereqx/pipeline.hpp"
#include "prereqx/prereq_matrix.hpp"
#include "test_helpers.hpp"

using namespace prereqx;
using test_helpers::fixture_dir;
using test_helpers::near;

namespace {

// Independent oracle: max over all simple paths of the minimum edge value,
// by exhaustive depth-first enumeration.
double max_min_path_oracle(const std::vector<std::vector<double>>& values, std::size_t source,
                           std::size_t sink) {
    std::size_t n = values.size();
    double best = 0.0;
    std::vector<bool> visited(n, false);
    visited[source] = true;
    auto dfs = [&](auto&& self, std::size_t node, double path_min) -> void {
        for (std::size_t next = 0; next < n; ++next) {
            if (visited[next] || values[node][next] <= 0.0) continue;
            double strength = std::min(path_min, values[node][next]);
            if (next == sink) {
                best = std::max(best, strength);
                continue;
            }
            visited[next] = true;
            self(self, next, strength);
            visited[next] = false;
        }
    };
    dfs(dfs, source, std::numeric_limits<double>::infinity());
    return best;
}

PrereqMatrix make_matrix(std::vector<std::vector<double>> values) {
    PrereqMatrix m;
    m.stage = MatrixStage::Explicit;
    for (std::size_t i = 0; i < values.size(); ++i) m.concepts.push_back("c" + std::to_string(i));
    m.values = std::move(values);
    return m;
}

std::vector<ConceptPlacement> minibook_placements() {
    LoadedCorpus corpus = load_corpus(fixture_dir() / "minibook");
    return resolve_concepts(corpus).placements;
}

}  // namespace

TEST_CASE("explicit_relations fills entries per the tfidf rule") {
    auto placements = minibook_placements();
    PrereqMatrix m = explicit_relations(placements);
    REQUIRE(m.n() == 6);
    CHECK(m.stage == MatrixStage::Explicit);

    std::size_t point = m.index_of("point"), line = m.index_of("line"),
                circle = m.index_of("circle"), polygon = m.index_of("polygon"),
                triangle = m.index_of("triangle");

    // line's content mentions point once; f'=3, df(point)=3, n=6
    CHECK(near(m.at(line, point), (1.0 / 3.0) * std::log(6.0 / 4.0)));
    // polygon's content mentions triangle once; f'=4, df(triangle)=2
    CHECK(near(m.at(polygon, triangle), (1.0 / 4.0) * std::log(6.0 / 3.0)));
    // absent mention -> 0
    CHECK(m.at(point, line) == 0.0);
    // diagonal forced 0
    for (std::size_t i = 0; i < m.n(); ++i) CHECK(m.at(i, i) == 0.0);
    // forward reference creates the planted spurious entry
    CHECK(m.at(point, circle) > 0.0);
}

TEST_CASE("explicit_relations of non-mentioning concepts is the zero matrix") {
    std::vector<ConceptPlacement> placements;
    const char* ids[] = {"ant", "bee", "cat"};
    const char* texts[] = {"about insects only", "about honey only", "about whiskers only"};
    for (int i = 0; i < 3; ++i) {
        ConceptPlacement p;
        p.concept_id = ids[i];
        p.rho = SectionNumber::parse(std::to_string(i + 1));
        p.sigma = texts[i];
        placements.push_back(p);
    }
    PrereqMatrix m = explicit_relations(placements);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(m.at(i, j) == 0.0);
}

TEST_CASE("basic concepts have all-zero rows") {
    std::vector<ConceptPlacement> placements;
    ConceptPlacement basic;
    basic.concept_id = "motion";
    basic.basic = true;
    placements.push_back(basic);
    ConceptPlacement placed;
    placed.concept_id = "force";
    placed.rho = SectionNumber::parse("1");
    placed.sigma = "force builds on motion and more motion";
    placements.push_back(placed);
    PrereqMatrix m = explicit_relations(placements);
    CHECK(m.at(0, 1) == 0.0);  // basic row
    CHECK(m.at(1, 0) > 0.0);   // placed row sees "motion"
}

TEST_CASE("implicit_closure examples") {
    SECTION("chain fills the missing pair at the path minimum") {
        PrereqMatrix m = make_matrix({{0.0, 0.5, 0.0}, {0.0, 0.0, 0.3}, {0.0, 0.0, 0.0}});
        PrereqMatrix closed = implicit_closure(m);
        CHECK(closed.stage == MatrixStage::Closed);
        CHECK(near(closed.at(0, 2), 0.3));
    }

    SECTION("explicit value above the best path survives") {
        PrereqMatrix m = make_matrix({{0.0, 0.5, 0.4}, {0.0, 0.0, 0.3}, {0.0, 0.0, 0.0}});
        PrereqMatrix closed = implicit_closure(m);
        CHECK(near(closed.at(0, 2), 0.4));
    }

    SECTION("no path stays zero") {
        PrereqMatrix m = make_matrix({{0.0, 0.5, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}});
        PrereqMatrix closed = implicit_closure(m);
        CHECK(closed.at(0, 2) == 0.0);
        CHECK(closed.at(2, 0) == 0.0);
    }

    SECTION("requires an explicit-stage matrix") {
        PrereqMatrix m = make_matrix({{0.0}});
        PrereqMatrix closed = implicit_closure(m);
        CHECK_THROWS_AS(implicit_closure(closed), Error);
    }
}

TEST_CASE("implicit_closure equals the brute-force path oracle on random matrices") {
    std::mt19937 rng(41);
    std::uniform_int_distribution<std::size_t> size(2, 8);
    std::uniform_int_distribution<int> level(0, 9);
    std::uniform_int_distribution<int> sparsity(0, 3);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = size(rng);
        std::vector<std::vector<double>> values(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && sparsity(rng) == 0) values[i][j] = 0.1 * level(rng);
        PrereqMatrix m = make_matrix(values);
        PrereqMatrix closed = implicit_closure(m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) {
                    CHECK(closed.at(i, j) == 0.0);
                    continue;
                }
                double expected = std::max(values[i][j], max_min_path_oracle(values, i, j));
                CHECK(closed.at(i, j) == expected);  // exact, values are only copied
            }
    }
}

TEST_CASE("implicit_closure is idempotent and monotone") {
    std::mt19937 rng(43);
    std::uniform_int_distribution<int> level(0, 9);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 6;
        std::vector<std::vector<double>> values(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && rng() % 3 == 0) values[i][j] = 0.1 * level(rng);
        PrereqMatrix m = make_matrix(values);
        PrereqMatrix closed = implicit_closure(m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) CHECK(closed.at(i, j) >= m.at(i, j));
        PrereqMatrix relabeled = closed;
        relabeled.stage = MatrixStage::Explicit;
        PrereqMatrix twice = implicit_closure(relabeled);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) CHECK(twice.at(i, j) == closed.at(i, j));
    }
}

TEST_CASE("single-pass closure only captures chains of length two") {
    // 0 -> 1 -> 2 -> 3
    PrereqMatrix m = make_matrix({{0.0, 0.5, 0.0, 0.0},
                                  {0.0, 0.0, 0.5, 0.0},
                                  {0.0, 0.0, 0.0, 0.5},
                                  {0.0, 0.0, 0.0, 0.0}});
    PrereqMatrix once = implicit_closure(m, ClosureMode::SinglePass);
    CHECK(near(once.at(0, 2), 0.5));
    CHECK(once.at(0, 3) == 0.0);  // needs two sweeps
    PrereqMatrix full = implicit_closure(m, ClosureMode::Fixpoint);
    CHECK(near(full.at(0, 3), 0.5));
}

TEST_CASE("apply_ordering keeps only strictly backward-pointing entries") {
    std::map<std::string, std::size_t> ranks = {{"c0", 2}, {"c1", 5}};
    SECTION("candidate taught later is zeroed") {
        PrereqMatrix m = make_matrix({{0.0, 0.4}, {0.0, 0.0}});
        PrereqMatrix ordered = apply_ordering(m, ranks);
        CHECK(ordered.at(0, 1) == 0.0);
        CHECK(ordered.stage == MatrixStage::Ordered);
    }
    SECTION("candidate taught earlier survives") {
        PrereqMatrix m = make_matrix({{0.0, 0.0}, {0.4, 0.0}});
        PrereqMatrix ordered = apply_ordering(m, ranks);
        CHECK(near(ordered.at(1, 0), 0.4));
    }
}

TEST_CASE("ordering filter leaves no directed two-cycles at any threshold") {
    std::mt19937 rng(47);
    std::uniform_int_distribution<int> level(0, 9);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 7;
        std::vector<std::vector<double>> values(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) values[i][j] = 0.1 * level(rng);
        PrereqMatrix m = make_matrix(values);
        std::map<std::string, std::size_t> ranks;
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
        for (std::size_t i = 0; i < n; ++i) ranks[m.concepts[i]] = perm[i];
        PrereqMatrix closed = implicit_closure(m);
        PrereqMatrix ordered = apply_ordering(closed, ranks);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (ordered.at(i, j) > 0.0) CHECK(ordered.at(j, i) == 0.0);
                CHECK(ordered.at(i, j) >= 0.0);
            }
    }
}

TEST_CASE("pair_features carries the matrix entry and rank difference") {
    auto placements = minibook_placements();
    LoadedCorpus corpus = load_corpus(fixture_dir() / "minibook");
    PipelineResult pipeline = build_pipeline(corpus);
    const PrereqMatrix& m = pipeline.final_matrix;
    const auto& ranks = pipeline.resolved.ranks;

    PairFeatures f = pair_features("polygon", "line", m, ranks);
    CHECK(f.order_diff == 3);  // rank 4 - rank 1
    CHECK(near(f.book_tfidf, m.at(m.index_of("polygon"), m.index_of("line"))));

    PairFeatures self = pair_features("line", "line", m, ranks);
    CHECK(self.order_diff == 0);
    CHECK(self.book_tfidf == 0.0);

    CHECK_THROWS_AS(pair_features("nosuch", "line", m, ranks), Error);
}

TEST_CASE("minibook matrix stages keep every entry nonnegative") {
    LoadedCorpus corpus = load_corpus(fixture_dir() / "minibook");
    PipelineResult pipeline = build_pipeline(corpus);
    for (const PrereqMatrix* m :
         {&pipeline.explicit_matrix, &pipeline.closed_matrix, &pipeline.final_matrix})
        for (std::size_t i = 0; i < m->n(); ++i)
            for (std::size_t j = 0; j < m->n(); ++j) CHECK(m->at(i, j) >= 0.0);
}
