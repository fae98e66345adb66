#pragma once

// Resolves each concept to the textbook section that defines it (sigma) and
// its position in the reading order (rho): title matching, ambiguity
// resolution against wiki content, first-discussion scan, final placement
// and the concept ranking used by the ordering filter.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prereqx/corpus.hpp"
#include "prereqx/corpus_io.hpp"
#include "prereqx/textstats.hpp"

namespace prereqx {

struct CandidateSet {
    std::string concept_id;
    std::vector<SectionNumber> sections;  // ascending

    bool empty() const { return sections.empty(); }
    std::size_t size() const { return sections.size(); }
};

struct FirstMention {
    std::string concept_id;
    std::optional<SectionNumber> section;
};

struct ConceptPlacement {
    std::string concept_id;
    std::string sigma;                  // defining section text, synonym-normalized
    std::optional<SectionNumber> rho;   // position; absent for basic concepts
    bool basic = false;                 // no titled section and no substantive mention
};

// Synonym-normalized view of the textbook with cached token sequences.
struct NormalizedSection {
    SectionNumber number;
    std::string title;
    std::string text;
    TokenSeq title_tokens;
    TokenSeq text_tokens;
};

struct NormalizedBook {
    std::vector<NormalizedSection> sections;  // reading order

    const NormalizedSection* find(const SectionNumber& number) const {
        for (const auto& s : sections)
            if (s.number == number) return &s;
        return nullptr;
    }

    std::vector<std::string> doc_set() const {
        std::vector<std::string> docs;
        docs.reserve(sections.size());
        for (const auto& s : sections) docs.push_back(s.text);
        return docs;
    }
};

inline NormalizedBook normalize_book(const TextbookCorpus& book, const SynonymTable& synonyms) {
    NormalizedBook out;
    out.sections.reserve(book.sections.size());
    for (const auto& s : book.sections) {
        NormalizedSection ns;
        ns.number = s.number;
        ns.title = normalize_text(s.title, synonyms);
        ns.text = normalize_text(s.text, synonyms);
        ns.title_tokens = tokenize(ns.title);
        ns.text_tokens = tokenize(ns.text);
        out.sections.push_back(std::move(ns));
    }
    return out;
}

// Sections whose normalized title equals the concept, contains it as a
// contiguous token run, or is contained in it. Token-level so "arc" does not
// match "architecture".
inline CandidateSet match_titles(const std::string& concept_id, const NormalizedBook& book) {
    CandidateSet out;
    out.concept_id = concept_id;
    TokenSeq concept_tokens = tokenize(concept_id);
    if (concept_tokens.empty()) return out;
    for (const auto& s : book.sections) {
        if (s.title_tokens.empty()) continue;
        bool concept_in_title = first_token_offset(concept_tokens, s.title_tokens) != std::string::npos;
        bool title_in_concept = first_token_offset(s.title_tokens, concept_tokens) != std::string::npos;
        if (concept_in_title || title_in_concept) out.sections.push_back(s.number);
    }
    return out;
}

// Reduces a candidate set to at most one section. Step one keeps the best
// wiki match within each chapter (hierarchical ambiguity), step two keeps the
// single best across chapters (multi-chapter ambiguity). Without a wiki page
// the shallowest, earliest candidate wins and a warning is recorded.
inline CandidateSet disambiguate(const CandidateSet& candidates,
                                 const std::optional<std::string>& wiki_text,
                                 const NormalizedBook& book, const VectorizerModel& vectorizer,
                                 std::vector<std::string>* warnings = nullptr) {
    if (candidates.size() <= 1) return candidates;

    CandidateSet out;
    out.concept_id = candidates.concept_id;

    if (!wiki_text) {
        const SectionNumber* pick = nullptr;
        for (const auto& number : candidates.sections) {
            if (!pick || number.depth() < pick->depth() ||
                (number.depth() == pick->depth() && number < *pick))
                pick = &number;
        }
        if (warnings)
            warnings->push_back("concept '" + candidates.concept_id +
                                "': no wiki page to disambiguate " +
                                std::to_string(candidates.size()) + " candidates, keeping '" +
                                pick->str() + "'");
        out.sections.push_back(*pick);
        return out;
    }

    DocVector ref = vectorizer.vectorize(*wiki_text);
    auto similarity = [&](const SectionNumber& number) {
        const NormalizedSection* s = book.find(number);
        return s ? cosine(vectorizer.vectorize(s->text), ref) : 0.0;
    };

    // one survivor per chapter
    std::map<int, SectionNumber> per_chapter;
    std::map<int, double> per_chapter_cos;
    for (const auto& number : candidates.sections) {
        double c = similarity(number);
        auto it = per_chapter.find(number.chapter());
        if (it == per_chapter.end() || c > per_chapter_cos[number.chapter()] ||
            (c == per_chapter_cos[number.chapter()] && number < it->second)) {
            per_chapter[number.chapter()] = number;
            per_chapter_cos[number.chapter()] = c;
        }
    }

    const SectionNumber* best = nullptr;
    double best_cos = -1.0;
    for (const auto& [chapter, number] : per_chapter) {
        double c = per_chapter_cos[chapter];
        if (c > best_cos || (c == best_cos && best && number < *best)) {
            best = &number;
            best_cos = c;
        }
    }
    out.sections.push_back(*best);
    return out;
}

// Earliest section in reading order where the concept occurs more than once;
// a single occurrence only references the concept without discussing it.
inline FirstMention first_discussion(const std::string& concept_id, const NormalizedBook& book) {
    FirstMention out;
    out.concept_id = concept_id;
    TokenSeq concept_tokens = tokenize(concept_id);
    if (concept_tokens.empty()) return out;
    for (const auto& s : book.sections) {
        if (phrase_freq(concept_tokens, s.text_tokens) > 1) {
            out.section = s.number;
            return out;
        }
    }
    return out;
}

// Final placement from the disambiguated title match (alpha) and the first
// substantive mention (beta). When both exist and differ, wiki content picks
// the better section; when only beta exists the concept is positioned there
// with no content; when neither exists the concept is basic.
inline ConceptPlacement finalize_placement(const CandidateSet& alpha, const FirstMention& beta,
                                           const std::optional<std::string>& wiki_text,
                                           const NormalizedBook& book,
                                           const VectorizerModel& vectorizer,
                                           std::vector<std::string>* warnings = nullptr) {
    if (alpha.size() > 1) throw Error("finalize_placement requires a disambiguated candidate set");
    ConceptPlacement out;
    out.concept_id = alpha.concept_id;

    auto text_of = [&](const SectionNumber& number) {
        const NormalizedSection* s = book.find(number);
        return s ? s->text : std::string{};
    };

    if (alpha.empty() && !beta.section) {
        out.basic = true;
        return out;
    }
    if (alpha.empty()) {
        out.rho = beta.section;
        return out;
    }
    const SectionNumber& a = alpha.sections.front();
    if (!beta.section || *beta.section == a) {
        out.rho = a;
        out.sigma = text_of(a);
        return out;
    }

    SectionNumber chosen = a;
    if (wiki_text) {
        DocVector ref = vectorizer.vectorize(*wiki_text);
        double cos_a = cosine(vectorizer.vectorize(text_of(a)), ref);
        double cos_b = cosine(vectorizer.vectorize(text_of(*beta.section)), ref);
        if (cos_b > cos_a || (cos_b == cos_a && *beta.section < a)) chosen = *beta.section;
    } else if (warnings) {
        warnings->push_back("concept '" + alpha.concept_id +
                            "': no wiki page to arbitrate title match '" + a.str() +
                            "' vs first discussion '" + beta.section->str() + "', keeping title match");
    }
    out.rho = chosen;
    out.sigma = text_of(chosen);
    return out;
}

// Total order over all concepts: basic concepts first by id, then placed
// concepts by section, ties within a section by the concept's first token
// offset there, then by id. Ranks are 0..n-1.
inline std::map<std::string, std::size_t> rank_concepts(const std::vector<ConceptPlacement>& placements,
                                                        const NormalizedBook& book) {
    struct Key {
        int placed;
        SectionNumber rho;
        std::size_t offset;
        std::string id;
    };
    std::vector<Key> keys;
    keys.reserve(placements.size());
    for (const auto& p : placements) {
        Key k;
        k.id = p.concept_id;
        if (!p.rho) {
            k.placed = 0;
            k.offset = 0;
        } else {
            k.placed = 1;
            k.rho = *p.rho;
            const NormalizedSection* s = book.find(*p.rho);
            k.offset = s ? first_token_offset(tokenize(p.concept_id), s->text_tokens)
                         : std::string::npos;
        }
        keys.push_back(std::move(k));
    }
    std::sort(keys.begin(), keys.end(), [](const Key& x, const Key& y) {
        if (x.placed != y.placed) return x.placed < y.placed;
        if (x.placed == 1 && x.rho != y.rho) return x.rho < y.rho;
        if (x.placed == 1 && x.offset != y.offset) return x.offset < y.offset;
        return x.id < y.id;
    });
    std::map<std::string, std::size_t> ranks;
    for (std::size_t i = 0; i < keys.size(); ++i) ranks[keys[i].id] = i;
    return ranks;
}

struct ResolveResult {
    std::vector<ConceptPlacement> placements;  // concept order
    std::map<std::string, std::size_t> ranks;
    std::vector<std::string> warnings;

    std::vector<std::string> sigma_docs() const {
        std::vector<std::string> docs;
        docs.reserve(placements.size());
        for (const auto& p : placements) docs.push_back(p.sigma);
        return docs;
    }
};

// Runs the whole placement pipeline for every concept. Deterministic: no
// randomness anywhere.
inline ResolveResult resolve_concepts(const LoadedCorpus& corpus) {
    ResolveResult result;
    NormalizedBook book = normalize_book(corpus.book, corpus.synonyms);
    VectorizerModel vectorizer(book.doc_set());

    std::map<std::string, std::string> wiki_normalized;
    for (const auto& [id, page] : corpus.wiki)
        wiki_normalized[id] = normalize_text(page.text, corpus.synonyms);

    for (const auto& c : corpus.concepts.all()) {
        std::optional<std::string> wiki_text;
        auto it = wiki_normalized.find(c.id);
        if (it != wiki_normalized.end()) wiki_text = it->second;

        CandidateSet alpha = match_titles(c.id, book);
        alpha = disambiguate(alpha, wiki_text, book, vectorizer, &result.warnings);
        FirstMention beta = first_discussion(c.id, book);
        result.placements.push_back(
            finalize_placement(alpha, beta, wiki_text, book, vectorizer, &result.warnings));
    }
    result.ranks = rank_concepts(result.placements, book);
    return result;
}

}  // namespace prereqx
