#pragma once

// The prerequisite confidence matrix: explicit relations from concept
// content, max-min transitive closure for implicit relations, and the
// concept-ordering filter. Entry (i, j) is the confidence that concept j is
// a prerequisite of concept i.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "prereqx/resolver.hpp"
#include "prereqx/textstats.hpp"

namespace prereqx {

enum class MatrixStage { Explicit, Closed, Ordered };

inline const char* to_string(MatrixStage stage) {
    switch (stage) {
        case MatrixStage::Explicit: return "explicit";
        case MatrixStage::Closed: return "closed";
        case MatrixStage::Ordered: return "ordered";
    }
    return "?";
}

inline MatrixStage matrix_stage_from_string(const std::string& s) {
    if (s == "explicit") return MatrixStage::Explicit;
    if (s == "closed") return MatrixStage::Closed;
    if (s == "ordered") return MatrixStage::Ordered;
    throw Error("unknown matrix stage '" + s + "'");
}

struct PrereqMatrix {
    std::vector<std::string> concepts;  // row/column order
    MatrixStage stage = MatrixStage::Explicit;
    std::vector<std::vector<double>> values;  // [target][candidate]

    std::size_t n() const { return concepts.size(); }

    double at(std::size_t i, std::size_t j) const { return values[i][j]; }

    std::size_t index_of(const std::string& id) const {
        for (std::size_t i = 0; i < concepts.size(); ++i)
            if (concepts[i] == id) return i;
        throw Error("unknown concept '" + id + "'");
    }
};

// Explicit relations: entry (i, j) is the TF-IDF of concept j in concept i's
// content when j occurs there, zero otherwise. The sigma documents are the
// document set for df; the diagonal is forced to zero.
inline PrereqMatrix explicit_relations(const std::vector<ConceptPlacement>& placements) {
    PrereqMatrix m;
    m.stage = MatrixStage::Explicit;
    std::vector<TokenSeq> phrases;
    std::vector<TokenSeq> docs;
    phrases.reserve(placements.size());
    docs.reserve(placements.size());
    for (const auto& p : placements) {
        m.concepts.push_back(p.concept_id);
        phrases.push_back(tokenize(p.concept_id));
        docs.push_back(tokenize(p.sigma));
    }

    ConceptTfidf tfidf(phrases, docs);
    std::size_t n = placements.size();
    m.values.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) m.values[i][j] = tfidf.score(j, i);
    return m;
}

enum class ClosureMode { Fixpoint, SinglePass };

// Max-min transitive closure: repeatedly raise each entry to the best
// max-over-k of min(value[i][k], value[k][j]) until nothing changes.
// Explicit values never decrease; the diagonal stays zero. SinglePass stops
// after one sweep and only captures chains of length two.
inline PrereqMatrix implicit_closure(const PrereqMatrix& m, ClosureMode mode = ClosureMode::Fixpoint) {
    if (m.stage != MatrixStage::Explicit)
        throw Error("implicit_closure expects an explicit-stage matrix");
    PrereqMatrix out = m;
    out.stage = MatrixStage::Closed;
    std::size_t n = m.n();
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::vector<double>> next = out.values;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                double best = out.values[i][j];
                for (std::size_t k = 0; k < n; ++k) {
                    double through = std::min(out.values[i][k], out.values[k][j]);
                    if (through > best) best = through;
                }
                if (best != out.values[i][j]) {
                    next[i][j] = best;
                    changed = true;
                }
            }
        }
        out.values = std::move(next);
        if (mode == ClosureMode::SinglePass) break;
    }
    return out;
}

// Zeroes every entry whose candidate is not taught strictly before its
// target. The surviving relation is acyclic at any threshold.
inline PrereqMatrix apply_ordering(const PrereqMatrix& m,
                                   const std::map<std::string, std::size_t>& ranks) {
    if (m.stage == MatrixStage::Ordered) throw Error("matrix is already ordered");
    PrereqMatrix out = m;
    out.stage = MatrixStage::Ordered;
    std::size_t n = m.n();
    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = ranks.find(m.concepts[i]);
        if (it == ranks.end()) throw Error("no rank for concept '" + m.concepts[i] + "'");
        rank[i] = it->second;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!(rank[i] > rank[j])) out.values[i][j] = 0.0;
    return out;
}

struct PairFeatures {
    double book_tfidf = 0.0;
    long order_diff = 0;
};

inline PairFeatures pair_features(const std::string& target, const std::string& candidate,
                                  const PrereqMatrix& m,
                                  const std::map<std::string, std::size_t>& ranks) {
    auto rank_of = [&](const std::string& id) {
        auto it = ranks.find(id);
        if (it == ranks.end()) throw Error("no rank for concept '" + id + "'");
        return static_cast<long>(it->second);
    };
    PairFeatures f;
    std::size_t i = m.index_of(target);
    std::size_t j = m.index_of(candidate);
    f.book_tfidf = m.values[i][j];
    f.order_diff = rank_of(target) - rank_of(candidate);
    return f;
}

}  // namespace prereqx
