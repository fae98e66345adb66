#pragma once

// Wikipedia-derived signals: the RefD reference-distance baseline, link-graph
// features (degrees, common neighbors, NGD, PMI, PageRank, HITS) and page
// text features. Degenerate cases use fixed sentinels: PMI with no
// co-occurrence is 0, NGD with disjoint neighborhoods is capped at 1e6.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "prereqx/corpus.hpp"
#include "prereqx/prereq_matrix.hpp"
#include "prereqx/textstats.hpp"

namespace prereqx {

constexpr double kNgdCap = 1e6;
constexpr double kPagerankDamping = 0.85;
constexpr double kGraphTolerance = 1e-8;

// Concept-indexed adjacency over the link graph, with PageRank and HITS
// computed once.
class LinkGraphView {
public:
    LinkGraphView(const std::vector<std::string>& concepts, const WikiLinkGraph& graph)
        : ids_(concepts), out_(concepts.size()), in_(concepts.size()) {
        for (std::size_t i = 0; i < concepts.size(); ++i) index_[concepts[i]] = i;
        for (std::size_t i = 0; i < concepts.size(); ++i) {
            for (const auto& t : graph.out_neighbors(concepts[i])) {
                auto it = index_.find(t);
                if (it == index_.end()) continue;
                out_[i].push_back(it->second);
                in_[it->second].push_back(i);
                ++edge_count_;
            }
        }
        for (auto& v : out_) std::sort(v.begin(), v.end());
        for (auto& v : in_) std::sort(v.begin(), v.end());
        compute_pagerank();
        compute_hits();
    }

    std::size_t size() const { return ids_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    std::size_t index_of(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw Error("concept '" + id + "' not in graph view");
        return it->second;
    }

    const std::vector<std::size_t>& out(std::size_t i) const { return out_[i]; }
    const std::vector<std::size_t>& in(std::size_t i) const { return in_[i]; }

    bool has_edge(std::size_t a, std::size_t b) const {
        return std::binary_search(out_[a].begin(), out_[a].end(), b);
    }

    // in/out neighborhood union, excluding the node itself
    std::vector<std::size_t> neighbors(std::size_t i) const {
        std::vector<std::size_t> u;
        std::set_union(in_[i].begin(), in_[i].end(), out_[i].begin(), out_[i].end(),
                       std::back_inserter(u));
        u.erase(std::remove(u.begin(), u.end(), i), u.end());
        return u;
    }

    double pagerank(std::size_t i) const { return pagerank_[i]; }
    double hub(std::size_t i) const { return hub_[i]; }
    double authority(std::size_t i) const { return authority_[i]; }

private:
    void compute_pagerank() {
        std::size_t n = ids_.size();
        pagerank_.assign(n, n ? 1.0 / static_cast<double>(n) : 0.0);
        if (n == 0) return;
        for (int iter = 0; iter < 1000; ++iter) {
            std::vector<double> next(n, 0.0);
            double dangling = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (out_[j].empty()) dangling += pagerank_[j];
            for (std::size_t j = 0; j < n; ++j) {
                double share = out_[j].empty() ? 0.0 : pagerank_[j] / static_cast<double>(out_[j].size());
                for (std::size_t t : out_[j]) next[t] += share;
            }
            double base = (1.0 - kPagerankDamping + kPagerankDamping * dangling) / static_cast<double>(n);
            double delta = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                next[i] = base + kPagerankDamping * next[i];
                delta += std::abs(next[i] - pagerank_[i]);
            }
            pagerank_ = std::move(next);
            if (delta < kGraphTolerance) break;
        }
    }

    void compute_hits() {
        std::size_t n = ids_.size();
        hub_.assign(n, 0.0);
        authority_.assign(n, 0.0);
        if (n == 0 || edge_count_ == 0) return;
        double init = 1.0 / std::sqrt(static_cast<double>(n));
        hub_.assign(n, init);
        authority_.assign(n, init);
        auto normalize = [](std::vector<double>& v) {
            double s = 0.0;
            for (double x : v) s += x * x;
            s = std::sqrt(s);
            if (s > 0.0)
                for (double& x : v) x /= s;
        };
        for (int iter = 0; iter < 1000; ++iter) {
            std::vector<double> auth_next(n, 0.0), hub_next(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j : in_[i]) auth_next[i] += hub_[j];
            normalize(auth_next);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j : out_[i]) hub_next[i] += auth_next[j];
            normalize(hub_next);
            double delta = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                delta += std::abs(auth_next[i] - authority_[i]) + std::abs(hub_next[i] - hub_[i]);
            authority_ = std::move(auth_next);
            hub_ = std::move(hub_next);
            if (delta < kGraphTolerance) break;
        }
    }

    std::vector<std::string> ids_;
    std::map<std::string, std::size_t> index_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> in_;
    std::size_t edge_count_ = 0;
    std::vector<double> pagerank_;
    std::vector<double> hub_;
    std::vector<double> authority_;
};

enum class RefdWeighting { Equal, Tfidf };

// Reference distance between two concepts: how strongly a's related concepts
// reference b, minus the reverse. Related concepts are out-links; under
// Tfidf weighting each related concept is weighted by its TF-IDF in the
// page. Antisymmetric by construction; zero when a denominator is zero.
inline double refd(const std::string& a, const std::string& b, const LinkGraphView& graph,
                   RefdWeighting weighting, const ConceptTfidf* page_tfidf = nullptr) {
    std::size_t ia = graph.index_of(a);
    std::size_t ib = graph.index_of(b);

    auto weight = [&](std::size_t c, std::size_t x) -> double {
        if (!graph.has_edge(x, c)) return 0.0;
        if (weighting == RefdWeighting::Equal) return 1.0;
        if (!page_tfidf) throw Error("tfidf weighting requires page contents");
        return page_tfidf->score(c, x);
    };
    auto directed = [&](std::size_t from, std::size_t to) -> double {
        double num = 0.0, den = 0.0;
        for (std::size_t c = 0; c < graph.size(); ++c) {
            double w = weight(c, from);
            if (w == 0.0) continue;
            den += w;
            if (graph.has_edge(c, to)) num += w;
        }
        return den == 0.0 ? 0.0 : num / den;
    };
    return directed(ia, ib) - directed(ib, ia);
}

struct GraphPairFeatures {
    double in_degree_a = 0, in_degree_b = 0;
    double out_degree_a = 0, out_degree_b = 0;
    double common_neighbors = 0;
    double links_ab = 0, links_ba = 0;
    double link_proportion = 0;
    double ngd = 0;
    double pmi = 0;
    double refd_equal = 0;
    double pagerank_a = 0, pagerank_b = 0;
    double hits_hub_a = 0, hits_auth_a = 0;
    double hits_hub_b = 0, hits_auth_b = 0;
};

inline GraphPairFeatures graph_features(const std::string& a, const std::string& b,
                                        const LinkGraphView& graph) {
    std::size_t ia = graph.index_of(a);
    std::size_t ib = graph.index_of(b);
    GraphPairFeatures f;
    f.in_degree_a = static_cast<double>(graph.in(ia).size());
    f.in_degree_b = static_cast<double>(graph.in(ib).size());
    f.out_degree_a = static_cast<double>(graph.out(ia).size());
    f.out_degree_b = static_cast<double>(graph.out(ib).size());

    auto na = graph.neighbors(ia);
    auto nb = graph.neighbors(ib);
    std::vector<std::size_t> common;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));
    f.common_neighbors = static_cast<double>(common.size());

    f.links_ab = graph.has_edge(ia, ib) ? 1.0 : 0.0;
    f.links_ba = graph.has_edge(ib, ia) ? 1.0 : 0.0;
    double total_out = f.out_degree_a + f.out_degree_b;
    f.link_proportion = total_out > 0.0 ? (f.links_ab + f.links_ba) / total_out : 0.0;

    // co-citation statistics over in-link sets
    const auto& in_a = graph.in(ia);
    const auto& in_b = graph.in(ib);
    std::vector<std::size_t> co;
    std::set_intersection(in_a.begin(), in_a.end(), in_b.begin(), in_b.end(), std::back_inserter(co));
    double fa = static_cast<double>(in_a.size());
    double fb = static_cast<double>(in_b.size());
    double fab = static_cast<double>(co.size());
    double n = static_cast<double>(graph.size());

    if (fa == 0.0 || fb == 0.0 || fab == 0.0) {
        f.ngd = kNgdCap;
        f.pmi = 0.0;
    } else {
        double num = std::max(std::log(fa), std::log(fb)) - std::log(fab);
        double den = std::log(n) - std::min(std::log(fa), std::log(fb));
        f.ngd = den > 0.0 ? num / den : kNgdCap;
        f.pmi = std::log(fab * n / (fa * fb));
    }

    f.refd_equal = refd(a, b, graph, RefdWeighting::Equal);
    f.pagerank_a = graph.pagerank(ia);
    f.pagerank_b = graph.pagerank(ib);
    f.hits_hub_a = graph.hub(ia);
    f.hits_auth_a = graph.authority(ia);
    f.hits_hub_b = graph.hub(ib);
    f.hits_auth_b = graph.authority(ib);
    return f;
}

inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& x : a) inter += b.count(x);
    std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

// Word embeddings in the plain text format: word SPACE floats, one per line.
class EmbeddingTable {
public:
    static EmbeddingTable load(const std::string& path) {
        EmbeddingTable table;
        std::ifstream in(path);
        if (!in) throw Error("cannot open embeddings file '" + path + "'");
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            std::istringstream ss(line);
            std::string word;
            ss >> word;
            std::vector<double> vec;
            double v;
            while (ss >> v) vec.push_back(v);
            if (vec.empty()) continue;
            if (table.dim_ == 0) table.dim_ = vec.size();
            if (vec.size() != table.dim_)
                throw Error("embeddings line " + std::to_string(lineno) + ": dimension mismatch");
            table.vectors_[detail::lowercase(word)] = std::move(vec);
        }
        return table;
    }

    std::size_t dim() const { return dim_; }

    // Mean vector of the tokens present in the table; zeros when none are.
    std::vector<double> mean_vector(const TokenSeq& tokens) const {
        std::vector<double> mean(dim_, 0.0);
        std::size_t hits = 0;
        for (const auto& t : tokens) {
            auto it = vectors_.find(t);
            if (it == vectors_.end()) continue;
            ++hits;
            for (std::size_t i = 0; i < dim_; ++i) mean[i] += it->second[i];
        }
        if (hits > 0)
            for (double& v : mean) v /= static_cast<double>(hits);
        return mean;
    }

    static double cosine_dense(const std::vector<double>& a, const std::vector<double>& b) {
        double dot = 0, na = 0, nb = 0;
        for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
            dot += a[i] * b[i];
            na += a[i] * a[i];
            nb += b[i] * b[i];
        }
        if (na == 0.0 || nb == 0.0) return 0.0;
        return dot / (std::sqrt(na) * std::sqrt(nb));
    }

private:
    std::size_t dim_ = 0;
    std::map<std::string, std::vector<double>> vectors_;
};

struct TextPairFeatures {
    double first_sentence_ab = 0, first_sentence_ba = 0;
    double in_title_ab = 0, in_title_ba = 0;
    double title_jaccard = 0;
    double log_length_a = 0, log_length_b = 0;
    double mention_ab = 0, mention_ba = 0;
    double tfidf_sim = 0;
    std::optional<double> w2v_sim;
    bool page_missing = false;
};

// Text features over (synonym-normalized) wiki pages. A missing page flags
// the row and leaves every value at zero.
inline TextPairFeatures text_features(const std::string& a, const std::string& b,
                                      const std::map<std::string, std::string>& pages,
                                      const VectorizerModel& vectorizer,
                                      const EmbeddingTable* embeddings = nullptr) {
    TextPairFeatures f;
    auto pa = pages.find(a);
    auto pb = pages.find(b);
    if (pa == pages.end() || pb == pages.end()) {
        f.page_missing = true;
        if (embeddings) f.w2v_sim = 0.0;
        return f;
    }
    const std::string& text_a = pa->second;
    const std::string& text_b = pb->second;
    TokenSeq tokens_a = tokenize(text_a);
    TokenSeq tokens_b = tokenize(text_b);
    TokenSeq phrase_a = tokenize(a);
    TokenSeq phrase_b = tokenize(b);

    // first period-terminated span of the page
    auto first_sentence = [](const std::string& text) {
        std::size_t dot = text.find('.');
        return dot == std::string::npos ? text : text.substr(0, dot);
    };
    f.first_sentence_ab =
        first_token_offset(phrase_b, tokenize(first_sentence(text_a))) != std::string::npos ? 1.0 : 0.0;
    f.first_sentence_ba =
        first_token_offset(phrase_a, tokenize(first_sentence(text_b))) != std::string::npos ? 1.0 : 0.0;

    f.in_title_ab = first_token_offset(phrase_b, phrase_a) != std::string::npos ? 1.0 : 0.0;
    f.in_title_ba = first_token_offset(phrase_a, phrase_b) != std::string::npos ? 1.0 : 0.0;
    f.title_jaccard = jaccard(std::set<std::string>(phrase_a.begin(), phrase_a.end()),
                              std::set<std::string>(phrase_b.begin(), phrase_b.end()));

    f.log_length_a = std::log(1.0 + static_cast<double>(tokens_a.size()));
    f.log_length_b = std::log(1.0 + static_cast<double>(tokens_b.size()));
    f.mention_ab = static_cast<double>(phrase_freq(phrase_b, tokens_a));
    f.mention_ba = static_cast<double>(phrase_freq(phrase_a, tokens_b));
    f.tfidf_sim = cosine(vectorizer.vectorize(text_a), vectorizer.vectorize(text_b));

    if (embeddings)
        f.w2v_sim = EmbeddingTable::cosine_dense(embeddings->mean_vector(tokens_a),
                                                 embeddings->mean_vector(tokens_b));
    return f;
}

struct FeatureRow {
    std::string target;
    std::string candidate;
    std::optional<int> label;
    std::vector<double> values;  // aligned with the table schema
};

struct FeatureTable {
    std::vector<std::string> schema;
    std::vector<FeatureRow> rows;
    std::vector<std::string> warnings;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < schema.size(); ++i)
            if (schema[i] == name) return i;
        throw Error("no feature named '" + name + "'");
    }
};

inline std::vector<std::string> graph_feature_names() {
    return {"in_degree_a",  "in_degree_b",  "out_degree_a", "out_degree_b", "common_neighbors",
            "links_ab",     "links_ba",     "link_proportion", "ngd",       "pmi",
            "refd_equal",   "pagerank_a",   "pagerank_b",   "hits_hub_a",   "hits_auth_a",
            "hits_hub_b",   "hits_auth_b"};
}

inline std::vector<std::string> text_feature_names(bool with_embeddings) {
    std::vector<std::string> names = {"first_sentence_ab", "first_sentence_ba", "in_title_ab",
                                      "in_title_ba",       "title_jaccard",     "log_length_a",
                                      "log_length_b",      "mention_ab",        "mention_ba",
                                      "tfidf_sim"};
    if (with_embeddings) names.push_back("w2v_sim");
    return names;
}

inline std::vector<std::string> proposed_feature_names() { return {"book_tfidf", "order_diff"}; }

// Per-pair feature extraction with the one-time graph statistics shared
// across pairs. Rows are deterministic for identical inputs.
class FeatureExtractor {
public:
    FeatureExtractor(const std::vector<std::string>& concepts, const WikiLinkGraph& graph,
                     const std::map<std::string, std::string>& normalized_pages,
                     const PrereqMatrix* ordered_matrix,
                     const std::map<std::string, std::size_t>* ranks,
                     const EmbeddingTable* embeddings = nullptr)
        : graph_(concepts, graph),
          pages_(normalized_pages),
          matrix_(ordered_matrix),
          ranks_(ranks),
          embeddings_(embeddings),
          page_docs_(),
          vectorizer_(nullptr) {
        for (const auto& [_, text] : pages_) page_docs_.push_back(text);
        vectorizer_ = std::make_unique<VectorizerModel>(page_docs_);
        if (matrix_ && !ranks_) throw Error("ordered matrix requires ranks");
    }

    std::vector<std::string> schema() const {
        std::vector<std::string> s = graph_feature_names();
        for (const auto& n : text_feature_names(embeddings_ != nullptr)) s.push_back(n);
        if (matrix_)
            for (const auto& n : proposed_feature_names()) s.push_back(n);
        return s;
    }

    FeatureTable extract(const std::vector<LabeledPair>& pairs) const {
        FeatureTable table;
        table.schema = schema();
        table.rows.reserve(pairs.size());
        for (const auto& p : pairs) {
            FeatureRow row;
            row.target = p.target;
            row.candidate = p.candidate;
            row.label = p.label;
            GraphPairFeatures g = graph_features(p.target, p.candidate, graph_);
            TextPairFeatures t = text_features(p.target, p.candidate, pages_, *vectorizer_,
                                               embeddings_);
            if (t.page_missing)
                table.warnings.push_back("pair (" + p.target + ", " + p.candidate +
                                         "): missing page, text features zeroed");
            row.values = {g.in_degree_a,  g.in_degree_b,  g.out_degree_a, g.out_degree_b,
                          g.common_neighbors, g.links_ab, g.links_ba,    g.link_proportion,
                          g.ngd,          g.pmi,          g.refd_equal,   g.pagerank_a,
                          g.pagerank_b,   g.hits_hub_a,   g.hits_auth_a,  g.hits_hub_b,
                          g.hits_auth_b};
            row.values.insert(row.values.end(),
                              {t.first_sentence_ab, t.first_sentence_ba, t.in_title_ab,
                               t.in_title_ba, t.title_jaccard, t.log_length_a, t.log_length_b,
                               t.mention_ab, t.mention_ba, t.tfidf_sim});
            if (embeddings_) row.values.push_back(t.w2v_sim.value_or(0.0));
            if (matrix_) {
                PairFeatures pf = pair_features(p.target, p.candidate, *matrix_, *ranks_);
                row.values.push_back(pf.book_tfidf);
                row.values.push_back(static_cast<double>(pf.order_diff));
            }
            table.rows.push_back(std::move(row));
        }
        return table;
    }

    const LinkGraphView& graph() const { return graph_; }

private:
    LinkGraphView graph_;
    std::map<std::string, std::string> pages_;
    const PrereqMatrix* matrix_;
    const std::map<std::string, std::size_t>* ranks_;
    const EmbeddingTable* embeddings_;
    std::vector<std::string> page_docs_;
    std::unique_ptr<VectorizerModel> vectorizer_;
};

}  // namespace prereqx
