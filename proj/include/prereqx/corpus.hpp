#pragma once

// Core corpus types: concepts, synonyms, textbook sections, wiki pages,
// the concept link graph and labeled prerequisite pairs.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace prereqx {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline bool is_word_char(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline char to_lower_ascii(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + ('a' - 'A')) : c;
}

inline std::string lowercase(std::string s) {
    for (char& c : s) c = to_lower_ascii(c);
    return s;
}

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

// Dot-separated section path, e.g. "3.2.2". Components are positive integers
// and compare numerically, so "3.10" sorts after "3.9" and a prefix precedes
// its extensions.
struct SectionNumber {
    std::vector<int> parts;

    static SectionNumber parse(const std::string& text) {
        SectionNumber out;
        if (text.empty()) throw Error("empty section number");
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t dot = text.find('.', pos);
            std::string comp = text.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
            if (comp.empty()) throw Error("malformed section number '" + text + "'");
            long value = 0;
            for (char c : comp) {
                if (c < '0' || c > '9') throw Error("malformed section number '" + text + "'");
                value = value * 10 + (c - '0');
                if (value > 1000000) throw Error("section component out of range in '" + text + "'");
            }
            if (value < 1) throw Error("section components must be positive in '" + text + "'");
            out.parts.push_back(static_cast<int>(value));
            if (dot == std::string::npos) break;
            pos = dot + 1;
        }
        return out;
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) s += '.';
            s += std::to_string(parts[i]);
        }
        return s;
    }

    int chapter() const { return parts.front(); }
    std::size_t depth() const { return parts.size(); }

    auto operator<=>(const SectionNumber&) const = default;
};

// Numeric-tuple ordering of section numbers given as strings.
inline std::strong_ordering compare_sections(const std::string& a, const std::string& b) {
    return SectionNumber::parse(a) <=> SectionNumber::parse(b);
}

struct Concept {
    std::string id;            // canonical lowercase form
    std::string display_name;  // as it appeared in the input
};

class ConceptSet {
public:
    void add(const std::string& name) {
        std::string id = detail::lowercase(detail::trim(name));
        if (id.empty()) throw Error("empty concept name");
        if (index_.count(id)) throw Error("duplicate concept '" + id + "'");
        index_[id] = concepts_.size();
        concepts_.push_back(Concept{id, detail::trim(name)});
    }

    bool contains(const std::string& id) const { return index_.count(id) > 0; }

    std::size_t index_of(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw Error("unknown concept '" + id + "'");
        return it->second;
    }

    const Concept& at(std::size_t i) const { return concepts_.at(i); }
    std::size_t size() const { return concepts_.size(); }
    const std::vector<Concept>& all() const { return concepts_; }

    std::vector<std::string> ids() const {
        std::vector<std::string> out;
        out.reserve(concepts_.size());
        for (const auto& c : concepts_) out.push_back(c.id);
        return out;
    }

private:
    std::vector<Concept> concepts_;
    std::map<std::string, std::size_t> index_;
};

// Surface form -> canonical concept id. Chains (a synonym whose canonical id
// is itself another entry's surface form) are collapsed at insertion time so
// that normalize_text is idempotent.
class SynonymTable {
public:
    SynonymTable() = default;

    void add(const std::string& canonical, const std::string& surface) {
        std::string c = detail::lowercase(detail::trim(canonical));
        std::string s = detail::lowercase(detail::trim(surface));
        if (c.empty() || s.empty()) throw Error("empty synonym entry");
        auto it = entries_.find(s);
        if (it != entries_.end() && it->second != c)
            throw Error("synonym '" + s + "' maps to both '" + it->second + "' and '" + c + "'");
        entries_[s] = c;
        collapse();
    }

    void validate_against(const ConceptSet& concepts) const {
        for (const auto& [surface, canonical] : entries_)
            if (!concepts.contains(canonical))
                throw Error("synonym '" + surface + "' references unknown concept '" + canonical + "'");
    }

    const std::map<std::string, std::string>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

private:
    void collapse() {
        for (auto& [surface, canonical] : entries_) {
            std::set<std::string> seen{surface};
            std::string cur = canonical;
            while (true) {
                auto next = entries_.find(cur);
                if (next == entries_.end() || next->second == cur) break;
                if (seen.count(cur)) throw Error("synonym cycle through '" + cur + "'");
                seen.insert(cur);
                cur = next->second;
            }
            canonical = cur;
        }
    }

    std::map<std::string, std::string> entries_;
};

// Lowercases the text and replaces every synonym occurrence with its
// canonical id. Longest surface form wins, matches are case-insensitive,
// non-overlapping, and only at word boundaries.
inline std::string normalize_text(const std::string& text, const SynonymTable& synonyms) {
    std::string lower = detail::lowercase(text);
    if (synonyms.size() == 0) return lower;

    // longest first so "angular speed" is not clobbered by "speed"
    std::vector<std::pair<std::string, std::string>> forms(synonyms.entries().begin(),
                                                           synonyms.entries().end());
    std::sort(forms.begin(), forms.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
        return a.first < b.first;
    });

    std::string out;
    out.reserve(lower.size());
    std::size_t i = 0;
    while (i < lower.size()) {
        bool replaced = false;
        bool at_word_start = detail::is_word_char(lower[i]) &&
                             (i == 0 || !detail::is_word_char(lower[i - 1]));
        if (at_word_start) {
            for (const auto& [surface, canonical] : forms) {
                if (lower.compare(i, surface.size(), surface) != 0) continue;
                std::size_t end = i + surface.size();
                if (end < lower.size() && detail::is_word_char(lower[end])) continue;
                out += canonical;
                i = end;
                replaced = true;
                break;
            }
        }
        if (!replaced) out += lower[i++];
    }
    return out;
}

struct TocSection {
    SectionNumber number;
    std::string title;
    std::string text;
};

struct TextbookCorpus {
    std::string title;
    std::vector<TocSection> sections;  // reading order

    std::size_t m() const { return sections.size(); }

    const TocSection* find(const SectionNumber& number) const {
        for (const auto& s : sections)
            if (s.number == number) return &s;
        return nullptr;
    }

    // Reading order must equal numeric order and numbers must be unique.
    void validate() const {
        for (std::size_t i = 1; i < sections.size(); ++i) {
            auto cmp = sections[i - 1].number <=> sections[i].number;
            if (cmp == std::strong_ordering::equal)
                throw Error("duplicate section number '" + sections[i].number.str() + "'");
            if (cmp == std::strong_ordering::greater)
                throw Error("sections out of reading order at '" + sections[i].number.str() + "'");
        }
    }
};

struct WikiPage {
    std::string concept_id;
    std::string text;
};

class WikiLinkGraph {
public:
    void add_edge(const std::string& source, const std::string& target) {
        if (source == target) throw Error("self link on '" + source + "'");
        if (out_[source].insert(target).second) {
            in_[target].insert(source);
            ++edge_count_;
        }
    }

    bool has_edge(const std::string& source, const std::string& target) const {
        auto it = out_.find(source);
        return it != out_.end() && it->second.count(target) > 0;
    }

    const std::set<std::string>& out_neighbors(const std::string& id) const {
        static const std::set<std::string> empty;
        auto it = out_.find(id);
        return it == out_.end() ? empty : it->second;
    }

    const std::set<std::string>& in_neighbors(const std::string& id) const {
        static const std::set<std::string> empty;
        auto it = in_.find(id);
        return it == in_.end() ? empty : it->second;
    }

    std::size_t edge_count() const { return edge_count_; }

private:
    std::map<std::string, std::set<std::string>> out_;
    std::map<std::string, std::set<std::string>> in_;
    std::size_t edge_count_ = 0;
};

// (target, candidate, label): label 1 means candidate is a prerequisite of target.
struct LabeledPair {
    std::string target;
    std::string candidate;
    int label = 0;
};

}  // namespace prereqx
