#pragma once

// Loading and validation of a corpus directory:
//   book.json     {"title": ..., "sections": [{"number","title","text"}, ...]}
//   concepts.txt  one canonical concept per line
//   synonyms.tsv  canonical TAB synonym
//   wiki/<slug>.txt   one page per concept, slug = id with spaces -> underscores
//   links.tsv     source TAB target
//   pairs.csv     header "target,candidate,label"
// Only book.json and concepts.txt are mandatory.

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "prereqx/corpus.hpp"

namespace prereqx {

struct CorpusCounts {
    std::size_t concepts = 0;
    std::size_t sections = 0;
    std::size_t synonyms = 0;
    std::size_t wiki_pages = 0;
    std::size_t link_edges = 0;
    std::size_t pairs = 0;
    std::size_t positive_pairs = 0;
};

struct LoadedCorpus {
    TextbookCorpus book;
    ConceptSet concepts;
    SynonymTable synonyms;
    std::map<std::string, WikiPage> wiki;  // concept id -> page
    WikiLinkGraph links;
    std::vector<LabeledPair> pairs;
    std::vector<std::string> warnings;
    CorpusCounts counts;

    bool has_page(const std::string& id) const { return wiki.count(id) > 0; }
};

struct LoadOptions {
    // Swap target/candidate on load, for external pair files whose column
    // convention is reversed.
    bool flip_pairs = false;
};

inline std::string wiki_slug(const std::string& concept_id) {
    std::string slug = concept_id;
    for (char& c : slug)
        if (c == ' ') c = '_';
    return slug;
}

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

inline TextbookCorpus parse_book_json(const nlohmann::json& j) {
    TextbookCorpus book;
    if (!j.is_object() || !j.contains("sections") || !j["sections"].is_array())
        throw Error("book.json must be an object with a 'sections' array");
    book.title = j.value("title", std::string{});
    for (const auto& s : j["sections"]) {
        TocSection section;
        if (!s.contains("number") || !s["number"].is_string())
            throw Error("book section missing string 'number'");
        section.number = SectionNumber::parse(s["number"].get<std::string>());
        section.title = s.value("title", std::string{});
        section.text = s.value("text", std::string{});
        book.sections.push_back(std::move(section));
    }
    book.validate();
    return book;
}

inline nlohmann::json book_to_json(const TextbookCorpus& book) {
    nlohmann::json sections = nlohmann::json::array();
    for (const auto& s : book.sections)
        sections.push_back({{"number", s.number.str()}, {"title", s.title}, {"text", s.text}});
    return {{"title", book.title}, {"sections", sections}};
}

inline LoadedCorpus load_corpus(const std::filesystem::path& dir, const LoadOptions& options = {}) {
    namespace fs = std::filesystem;
    LoadedCorpus corpus;

    fs::path book_path = dir / "book.json";
    if (!fs::exists(book_path)) throw Error("missing file '" + book_path.string() + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(detail::read_file(book_path));
    } catch (const nlohmann::json::exception& e) {
        throw Error("cannot parse '" + book_path.string() + "': " + e.what());
    }
    corpus.book = parse_book_json(j);

    fs::path concepts_path = dir / "concepts.txt";
    if (!fs::exists(concepts_path)) throw Error("missing file '" + concepts_path.string() + "'");
    for (const auto& line : detail::read_lines(concepts_path)) {
        std::string name = detail::trim(line);
        if (name.empty()) continue;
        corpus.concepts.add(name);
    }
    if (corpus.concepts.size() == 0) throw Error("no concepts in '" + concepts_path.string() + "'");

    fs::path synonyms_path = dir / "synonyms.tsv";
    if (fs::exists(synonyms_path)) {
        std::size_t lineno = 0;
        for (const auto& line : detail::read_lines(synonyms_path)) {
            ++lineno;
            if (detail::trim(line).empty()) continue;
            std::size_t tab = line.find('\t');
            if (tab == std::string::npos)
                throw Error("synonyms.tsv line " + std::to_string(lineno) + ": expected canonical TAB synonym");
            corpus.synonyms.add(line.substr(0, tab), line.substr(tab + 1));
        }
        corpus.synonyms.validate_against(corpus.concepts);
    }

    fs::path wiki_dir = dir / "wiki";
    if (fs::exists(wiki_dir)) {
        for (const auto& c : corpus.concepts.all()) {
            fs::path page = wiki_dir / (wiki_slug(c.id) + ".txt");
            if (fs::exists(page)) corpus.wiki[c.id] = WikiPage{c.id, detail::read_file(page)};
        }
    }

    fs::path links_path = dir / "links.tsv";
    if (fs::exists(links_path)) {
        std::size_t lineno = 0;
        for (const auto& line : detail::read_lines(links_path)) {
            ++lineno;
            if (detail::trim(line).empty()) continue;
            std::size_t tab = line.find('\t');
            if (tab == std::string::npos)
                throw Error("links.tsv line " + std::to_string(lineno) + ": expected source TAB target");
            std::string source = detail::lowercase(detail::trim(line.substr(0, tab)));
            std::string target = detail::lowercase(detail::trim(line.substr(tab + 1)));
            if (!corpus.concepts.contains(source) || !corpus.concepts.contains(target)) {
                corpus.warnings.push_back("links.tsv line " + std::to_string(lineno) +
                                          ": edge outside concept set dropped");
                continue;
            }
            if (source == target) {
                corpus.warnings.push_back("links.tsv line " + std::to_string(lineno) + ": self link dropped");
                continue;
            }
            corpus.links.add_edge(source, target);
        }
    }

    fs::path pairs_path = dir / "pairs.csv";
    if (fs::exists(pairs_path)) {
        auto lines = detail::read_lines(pairs_path);
        if (!lines.empty()) {
            if (detail::trim(lines.front()) != "target,candidate,label")
                throw Error("pairs.csv must start with header 'target,candidate,label'");
            for (std::size_t i = 1; i < lines.size(); ++i) {
                if (detail::trim(lines[i]).empty()) continue;
                auto fields = detail::split_csv_line(lines[i]);
                if (fields.size() != 3)
                    throw Error("pairs.csv line " + std::to_string(i + 1) + ": expected 3 fields");
                LabeledPair pair;
                pair.target = detail::lowercase(detail::trim(fields[0]));
                pair.candidate = detail::lowercase(detail::trim(fields[1]));
                std::string label = detail::trim(fields[2]);
                if (label != "0" && label != "1")
                    throw Error("pairs.csv line " + std::to_string(i + 1) + ": label must be 0 or 1");
                pair.label = label == "1" ? 1 : 0;
                if (options.flip_pairs) std::swap(pair.target, pair.candidate);
                if (pair.target == pair.candidate)
                    throw Error("pairs.csv line " + std::to_string(i + 1) + ": target equals candidate");
                if (!corpus.concepts.contains(pair.target))
                    throw Error("pairs.csv line " + std::to_string(i + 1) + ": unknown concept '" +
                                pair.target + "'");
                if (!corpus.concepts.contains(pair.candidate))
                    throw Error("pairs.csv line " + std::to_string(i + 1) + ": unknown concept '" +
                                pair.candidate + "'");
                for (const auto& id : {pair.target, pair.candidate}) {
                    if (!corpus.has_page(id))
                        corpus.warnings.push_back("pair (" + pair.target + ", " + pair.candidate +
                                                  "): no wiki page for '" + id + "', pair kept");
                }
                corpus.pairs.push_back(std::move(pair));
            }
        }
    }

    corpus.counts.concepts = corpus.concepts.size();
    corpus.counts.sections = corpus.book.m();
    corpus.counts.synonyms = corpus.synonyms.size();
    corpus.counts.wiki_pages = corpus.wiki.size();
    corpus.counts.link_edges = corpus.links.edge_count();
    corpus.counts.pairs = corpus.pairs.size();
    for (const auto& p : corpus.pairs)
        if (p.label == 1) ++corpus.counts.positive_pairs;
    return corpus;
}

}  // namespace prereqx
