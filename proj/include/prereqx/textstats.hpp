#pragma once

// Tokenization, phrase counting, TF-IDF scoring and cosine document matching.

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "prereqx/corpus.hpp"

namespace prereqx {

using TokenSeq = std::vector<std::string>;

// Lowercase word tokens, split on any non-alphanumeric run.
inline TokenSeq tokenize(const std::string& text) {
    TokenSeq tokens;
    std::string cur;
    for (char c : text) {
        if (detail::is_word_char(c)) {
            cur += detail::to_lower_ascii(c);
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

// Non-overlapping occurrences of the phrase token run inside the text tokens.
inline std::size_t phrase_freq(const TokenSeq& phrase, const TokenSeq& text) {
    if (phrase.empty() || text.size() < phrase.size()) return 0;
    std::size_t count = 0;
    std::size_t i = 0;
    while (i + phrase.size() <= text.size()) {
        bool match = true;
        for (std::size_t k = 0; k < phrase.size(); ++k) {
            if (text[i + k] != phrase[k]) {
                match = false;
                break;
            }
        }
        if (match) {
            ++count;
            i += phrase.size();
        } else {
            ++i;
        }
    }
    return count;
}

inline std::size_t phrase_freq(const std::string& phrase, const std::string& text) {
    return phrase_freq(tokenize(phrase), tokenize(text));
}

// First token offset of the phrase run in the text, or npos when absent.
inline std::size_t first_token_offset(const TokenSeq& phrase, const TokenSeq& text) {
    if (phrase.empty() || text.size() < phrase.size()) return std::string::npos;
    for (std::size_t i = 0; i + phrase.size() <= text.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < phrase.size(); ++k) {
            if (text[i + k] != phrase[k]) {
                match = false;
                break;
            }
        }
        if (match) return i;
    }
    return std::string::npos;
}

// TF-IDF of a concept in a document: (f / f') * ln(N / (df + 1)), clamped at
// zero. f' is the total count of concept-phrase occurrences in the document,
// N the concept count, df the number of documents containing the concept.
inline double concept_tfidf(double f, double f_prime, std::size_t n_concepts, std::size_t df) {
    if (f <= 0.0 || f_prime <= 0.0) return 0.0;
    double idf = std::log(static_cast<double>(n_concepts) / static_cast<double>(df + 1));
    double v = (f / f_prime) * idf;
    return v > 0.0 ? v : 0.0;
}

// Precomputed concept-in-document frequencies for a fixed document set.
class ConceptTfidf {
public:
    ConceptTfidf(const std::vector<TokenSeq>& concept_phrases, const std::vector<TokenSeq>& docs)
        : n_concepts_(concept_phrases.size()),
          freq_(concept_phrases.size(), std::vector<std::size_t>(docs.size(), 0)),
          df_(concept_phrases.size(), 0),
          total_concept_occurrences_(docs.size(), 0) {
        for (std::size_t c = 0; c < concept_phrases.size(); ++c) {
            for (std::size_t d = 0; d < docs.size(); ++d) {
                std::size_t f = phrase_freq(concept_phrases[c], docs[d]);
                freq_[c][d] = f;
                if (f > 0) ++df_[c];
                total_concept_occurrences_[d] += f;
            }
        }
    }

    std::size_t freq(std::size_t concept_index, std::size_t doc) const {
        return freq_[concept_index][doc];
    }
    std::size_t df(std::size_t concept_index) const { return df_[concept_index]; }
    std::size_t total_occurrences(std::size_t doc) const { return total_concept_occurrences_[doc]; }

    double score(std::size_t concept_index, std::size_t doc) const {
        return concept_tfidf(static_cast<double>(freq_[concept_index][doc]),
                             static_cast<double>(total_concept_occurrences_[doc]), n_concepts_,
                             df_[concept_index]);
    }

private:
    std::size_t n_concepts_;
    std::vector<std::vector<std::size_t>> freq_;
    std::vector<std::size_t> df_;
    std::vector<std::size_t> total_concept_occurrences_;
};

// Sparse nonnegative term-weight vector; zero weights are never stored.
struct DocVector {
    std::map<std::string, double> weights;

    bool empty() const { return weights.empty(); }

    double norm() const {
        double s = 0.0;
        for (const auto& [_, w] : weights) s += w * w;
        return std::sqrt(s);
    }
};

inline double cosine(const DocVector& a, const DocVector& b) {
    double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    const auto& small = a.weights.size() <= b.weights.size() ? a : b;
    const auto& large = a.weights.size() <= b.weights.size() ? b : a;
    double dot = 0.0;
    for (const auto& [term, w] : small.weights) {
        auto it = large.weights.find(term);
        if (it != large.weights.end()) dot += w * it->second;
    }
    double v = dot / (na * nb);
    return v > 1.0 ? 1.0 : (v < 0.0 ? 0.0 : v);
}

// Token-level TF-IDF vectorizer over a fixed document set. Weights are
// (f / f') * (ln((1 + N) / (1 + df)) + 1); the smoothed idf stays positive so
// document matching keeps signal even on tiny document sets.
class VectorizerModel {
public:
    explicit VectorizerModel(const std::vector<std::string>& doc_set) : n_docs_(doc_set.size()) {
        for (const auto& doc : doc_set) {
            std::map<std::string, bool> seen;
            for (const auto& tok : tokenize(doc)) seen[tok] = true;
            for (const auto& [tok, _] : seen) ++df_[tok];
        }
    }

    double idf(const std::string& token) const {
        auto it = df_.find(token);
        std::size_t df = it == df_.end() ? 0 : it->second;
        return std::log(static_cast<double>(1 + n_docs_) / static_cast<double>(1 + df)) + 1.0;
    }

    DocVector vectorize(const std::string& doc) const {
        DocVector out;
        TokenSeq tokens = tokenize(doc);
        if (tokens.empty()) return out;
        std::map<std::string, std::size_t> counts;
        for (const auto& t : tokens) ++counts[t];
        double total = static_cast<double>(tokens.size());
        for (const auto& [tok, f] : counts) {
            double w = (static_cast<double>(f) / total) * idf(tok);
            if (w > 0.0) out.weights[tok] = w;
        }
        return out;
    }

    std::size_t doc_count() const { return n_docs_; }

private:
    std::size_t n_docs_;
    std::map<std::string, std::size_t> df_;
};

inline DocVector vectorize(const std::string& doc, const std::vector<std::string>& doc_set) {
    return VectorizerModel(doc_set).vectorize(doc);
}

// Index of the candidate vector most similar to the reference; ties resolve
// to the lowest index.
inline std::size_t best_match_index(const std::vector<DocVector>& candidates, const DocVector& reference) {
    std::size_t best = 0;
    double best_cos = -1.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        double c = cosine(candidates[i], reference);
        if (c > best_cos) {
            best_cos = c;
            best = i;
        }
    }
    return best;
}

// Candidate section whose text best matches the reference document; ties
// break toward the earliest section number.
inline const TocSection& best_match(const std::vector<TocSection>& candidates,
                                    const std::string& reference,
                                    const std::vector<std::string>& doc_set) {
    if (candidates.empty()) throw Error("best_match requires at least one candidate");
    VectorizerModel model(doc_set);
    DocVector ref = model.vectorize(reference);
    const TocSection* best = &candidates.front();
    double best_cos = cosine(model.vectorize(best->text), ref);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        double c = cosine(model.vectorize(candidates[i].text), ref);
        if (c > best_cos || (c == best_cos && candidates[i].number < best->number)) {
            best_cos = c;
            best = &candidates[i];
        }
    }
    return *best;
}

}  // namespace prereqx
