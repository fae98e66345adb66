#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <random>

#include "prereqx/wiki_features.hpp"
#include "test_helpers.hpp"

using namespace prereqx;
using test_helpers::near;
using test_helpers::scratch_dir;

namespace {

WikiLinkGraph graph_of(const std::vector<std::pair<std::string, std::string>>& edges) {
    WikiLinkGraph g;
    for (const auto& [s, t] : edges) g.add_edge(s, t);
    return g;
}

}  // namespace

TEST_CASE("refd equal weighting on the three-node fixture") {
    std::vector<std::string> concepts = {"a", "b", "c1"};

    SECTION("empty graph gives zero") {
        LinkGraphView view(concepts, WikiLinkGraph{});
        CHECK(refd("a", "b", view, RefdWeighting::Equal) == 0.0);
    }

    SECTION("fully symmetric structure gives zero") {
        LinkGraphView view(concepts, graph_of({{"a", "c1"}, {"b", "c1"}, {"c1", "a"}, {"c1", "b"}}));
        CHECK(near(refd("a", "b", view, RefdWeighting::Equal), 0.0, 1e-12));
    }

    SECTION("a's related concept links to b, nothing back") {
        LinkGraphView view(concepts, graph_of({{"a", "c1"}, {"c1", "b"}}));
        CHECK(near(refd("a", "b", view, RefdWeighting::Equal), 1.0));
        CHECK(near(refd("b", "a", view, RefdWeighting::Equal), -1.0));
    }
}

TEST_CASE("refd tfidf weighting with hand-computed page weights") {
    std::vector<std::string> concepts = {"apple", "berry", "cedar", "dogwood"};
    LinkGraphView view(concepts,
                       graph_of({{"apple", "cedar"}, {"apple", "dogwood"}, {"cedar", "berry"}}));
    // apple's page mentions cedar twice and dogwood once; idf is identical for
    // both, so the weights stand in ratio 2:1 and the first term is 2/3
    std::vector<TokenSeq> phrases, pages;
    for (const auto& c : concepts) phrases.push_back(tokenize(c));
    pages.push_back(tokenize("cedar cedar dogwood apple orchard"));
    pages.push_back(tokenize("small fruit"));
    pages.push_back(tokenize("evergreen timber"));
    pages.push_back(tokenize("flowering tree"));
    ConceptTfidf page_tfidf(phrases, pages);

    double v = refd("apple", "berry", view, RefdWeighting::Tfidf, &page_tfidf);
    CHECK(near(v, 2.0 / 3.0));
    CHECK(near(refd("berry", "apple", view, RefdWeighting::Tfidf, &page_tfidf), -2.0 / 3.0));
    CHECK(near(refd("apple", "berry", view, RefdWeighting::Equal), 0.5));
}

TEST_CASE("refd is antisymmetric on random graphs") {
    std::mt19937 rng(53);
    std::vector<std::string> concepts;
    for (int i = 0; i < 6; ++i) concepts.push_back("n" + std::to_string(i));
    for (int trial = 0; trial < 40; ++trial) {
        WikiLinkGraph g;
        for (const auto& s : concepts)
            for (const auto& t : concepts)
                if (s != t && rng() % 3 == 0) g.add_edge(s, t);
        LinkGraphView view(concepts, g);
        for (int pair = 0; pair < 5; ++pair) {
            std::string a = concepts[rng() % concepts.size()];
            std::string b = concepts[rng() % concepts.size()];
            if (a == b) continue;
            double ab = refd(a, b, view, RefdWeighting::Equal);
            CHECK(near(ab, -refd(b, a, view, RefdWeighting::Equal), 1e-12));
            CHECK(ab >= -1.0);
            CHECK(ab <= 1.0);
        }
    }
}

TEST_CASE("graph features on degenerate and hand-built graphs") {
    SECTION("two isolated nodes") {
        std::vector<std::string> concepts = {"a", "b"};
        LinkGraphView view(concepts, WikiLinkGraph{});
        GraphPairFeatures f = graph_features("a", "b", view);
        CHECK(f.in_degree_a == 0.0);
        CHECK(f.out_degree_b == 0.0);
        CHECK(f.common_neighbors == 0.0);
        CHECK(f.links_ab == 0.0);
        CHECK(f.link_proportion == 0.0);
        CHECK(f.pmi == 0.0);          // floor
        CHECK(f.ngd == 1e6);          // cap
        CHECK(near(f.pagerank_a, 0.5, 1e-6));
        CHECK(f.hits_hub_a == 0.0);   // no edges at all
    }

    SECTION("symmetric two-cycle splits pagerank evenly") {
        std::vector<std::string> concepts = {"a", "b"};
        LinkGraphView view(concepts, graph_of({{"a", "b"}, {"b", "a"}}));
        GraphPairFeatures f = graph_features("a", "b", view);
        CHECK(near(f.pagerank_a, 0.5, 1e-6));
        CHECK(near(f.pagerank_b, 0.5, 1e-6));
        CHECK(f.links_ab == 1.0);
        CHECK(f.links_ba == 1.0);
        CHECK(near(f.link_proportion, 1.0));
    }

    SECTION("common neighbors by hand enumeration, pmi ln 2, ngd 0") {
        std::vector<std::string> concepts = {"a", "b", "c", "d"};
        LinkGraphView view(concepts, graph_of({{"c", "a"}, {"c", "b"}, {"d", "a"}, {"d", "b"}}));
        GraphPairFeatures f = graph_features("a", "b", view);
        CHECK(f.common_neighbors == 2.0);
        CHECK(near(f.pmi, std::log(2.0)));
        CHECK(near(f.ngd, 0.0));
        CHECK(f.in_degree_a == 2.0);
        CHECK(f.in_degree_b == 2.0);
    }

    SECTION("ngd one half on the asymmetric co-citation fixture") {
        std::vector<std::string> concepts = {"a", "b", "c", "d"};
        LinkGraphView view(concepts, graph_of({{"c", "a"}, {"d", "a"}, {"c", "b"}}));
        GraphPairFeatures f = graph_features("a", "b", view);
        // fa=2, fb=1, fab=1, n=4: ngd = ln2 / ln4 = 1/2, pmi = ln(4/2) = ln 2
        CHECK(near(f.ngd, 0.5));
        CHECK(near(f.pmi, std::log(2.0)));
    }
}

TEST_CASE("pagerank sums to one and hits has unit norm on random graphs") {
    std::mt19937 rng(59);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t n = 3 + rng() % 6;
        std::vector<std::string> concepts;
        for (std::size_t i = 0; i < n; ++i) concepts.push_back("n" + std::to_string(i));
        WikiLinkGraph g;
        std::size_t edges = 0;
        for (const auto& s : concepts)
            for (const auto& t : concepts)
                if (s != t && rng() % 3 == 0) {
                    g.add_edge(s, t);
                    ++edges;
                }
        LinkGraphView view(concepts, g);
        double pr_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            pr_sum += view.pagerank(i);
            CHECK(view.hub(i) >= 0.0);
            CHECK(view.authority(i) >= 0.0);
        }
        CHECK(near(pr_sum, 1.0, 1e-6));
        if (edges > 0) {
            double hub_norm = 0.0, auth_norm = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                hub_norm += view.hub(i) * view.hub(i);
                auth_norm += view.authority(i) * view.authority(i);
            }
            CHECK(near(std::sqrt(hub_norm), 1.0, 1e-6));
            CHECK(near(std::sqrt(auth_norm), 1.0, 1e-6));
        }
    }
}

TEST_CASE("jaccard title similarity") {
    CHECK(near(jaccard({"right", "triangle"}, {"right", "triangle"}), 1.0));
    CHECK(near(jaccard({"right", "triangle"}, {"triangle", "area"}), 1.0 / 3.0));
    CHECK(jaccard({}, {}) == 0.0);
    CHECK(jaccard({"x"}, {"y"}) == 0.0);
}

TEST_CASE("text features on constructed pages") {
    std::map<std::string, std::string> pages = {
        {"right triangle",
         "a right triangle has one angle of ninety degrees and relates to triangle area. "
         "its sides follow a famous rule."},
        {"triangle area",
         "the triangle area is half of base times height. a right triangle makes this easy."},
    };
    VectorizerModel vectorizer({pages.at("right triangle"), pages.at("triangle area")});

    TextPairFeatures f =
        text_features("right triangle", "triangle area", pages, vectorizer);
    CHECK_FALSE(f.page_missing);
    // b's phrase occurs in a's first sentence; a's phrase is not in b's first sentence
    CHECK(f.first_sentence_ab == 1.0);
    CHECK(f.first_sentence_ba == 0.0);
    // "triangle area" not inside "right triangle" and vice versa
    CHECK(f.in_title_ab == 0.0);
    CHECK(f.in_title_ba == 0.0);
    CHECK(near(f.title_jaccard, 1.0 / 3.0));
    CHECK(f.mention_ab == 1.0);
    CHECK(f.mention_ba == 1.0);
    CHECK(near(f.log_length_a, std::log(1.0 + 20.0)));
    CHECK(f.tfidf_sim >= 0.0);
    CHECK(f.tfidf_sim <= 1.0);
    CHECK_FALSE(f.w2v_sim.has_value());

    SECTION("in_title fires for nested concept names") {
        std::map<std::string, std::string> p2 = {{"right triangle", "a page."},
                                                 {"triangle", "another page."}};
        TextPairFeatures g = text_features("right triangle", "triangle", p2, vectorizer);
        CHECK(g.in_title_ab == 1.0);
        CHECK(g.in_title_ba == 0.0);
        CHECK(near(g.title_jaccard, 0.5));
    }

    SECTION("missing page flags the row and zeroes values") {
        TextPairFeatures g = text_features("right triangle", "nosuch", pages, vectorizer);
        CHECK(g.page_missing);
        CHECK(g.mention_ab == 0.0);
        CHECK(g.tfidf_sim == 0.0);
    }
}

TEST_CASE("word embedding similarity with a hand-computed mean cosine") {
    auto dir = scratch_dir("embeddings");
    std::ofstream(dir / "vectors.txt") << "sun 1 0\nmoon 0 1\nstar 1 1\n";
    EmbeddingTable table = EmbeddingTable::load((dir / "vectors.txt").string());
    REQUIRE(table.dim() == 2);

    std::map<std::string, std::string> pages = {{"day", "sun star"}, {"night", "moon star"}};
    VectorizerModel vectorizer({pages.at("day"), pages.at("night")});
    TextPairFeatures f = text_features("day", "night", pages, vectorizer, &table);
    REQUIRE(f.w2v_sim.has_value());
    // means (1, .5) and (.5, 1): cosine = 1.0 / 1.25 = 0.8
    CHECK(near(*f.w2v_sim, 0.8));
}

TEST_CASE("feature extraction is deterministic and schema-aligned") {
    std::vector<std::string> concepts = {"gears", "levers", "pulleys"};
    WikiLinkGraph g = graph_of({{"gears", "levers"}, {"pulleys", "gears"}, {"levers", "gears"}});
    std::map<std::string, std::string> pages = {
        {"gears", "gears mesh with levers to move loads."},
        {"levers", "levers trade distance for force."},
        {"pulleys", "pulleys redirect force using gears sometimes."}};
    std::vector<LabeledPair> pairs = {{"gears", "levers", 1}, {"pulleys", "gears", 0}};

    FeatureExtractor extractor(concepts, g, pages, nullptr, nullptr);
    FeatureTable first = extractor.extract(pairs);
    FeatureTable second = extractor.extract(pairs);

    REQUIRE(first.schema.size() == graph_feature_names().size() + text_feature_names(false).size());
    REQUIRE(first.rows.size() == 2);
    for (std::size_t r = 0; r < first.rows.size(); ++r) {
        REQUIRE(first.rows[r].values.size() == first.schema.size());
        for (std::size_t c = 0; c < first.schema.size(); ++c)
            CHECK(first.rows[r].values[c] == second.rows[r].values[c]);
    }
    CHECK(first.rows[0].label == 1);
    CHECK(first.rows[0].values[first.column("links_ab")] == 1.0);
}
