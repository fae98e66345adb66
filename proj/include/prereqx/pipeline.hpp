#pragma once

// End-to-end matrix construction: resolve placements, build the explicit
// matrix, close it, and optionally apply the ordering filter.

#include "prereqx/corpus_io.hpp"
#include "prereqx/prereq_matrix.hpp"
#include "prereqx/resolver.hpp"

namespace prereqx {

struct PipelineOptions {
    bool ordering = true;
    ClosureMode closure = ClosureMode::Fixpoint;
};

struct PipelineResult {
    ResolveResult resolved;
    PrereqMatrix explicit_matrix;
    PrereqMatrix closed_matrix;
    PrereqMatrix final_matrix;  // ordered, or the closed matrix when ordering is off
};

inline PipelineResult build_pipeline(const LoadedCorpus& corpus, const PipelineOptions& options = {}) {
    PipelineResult result;
    result.resolved = resolve_concepts(corpus);
    result.explicit_matrix = explicit_relations(result.resolved.placements);
    result.closed_matrix = implicit_closure(result.explicit_matrix, options.closure);
    result.final_matrix = options.ordering
                              ? apply_ordering(result.closed_matrix, result.resolved.ranks)
                              : result.closed_matrix;
    return result;
}

inline std::vector<double> pair_scores(const PrereqMatrix& m, const std::vector<LabeledPair>& pairs) {
    std::vector<double> scores;
    scores.reserve(pairs.size());
    for (const auto& p : pairs) scores.push_back(m.at(m.index_of(p.target), m.index_of(p.candidate)));
    return scores;
}

}  // namespace prereqx
