#pragma once

// Feature table CSV: header "target,candidate,label,<feature names...>".
// Numbers are written in shortest round-trip form so files are reproducible
// and reload exactly.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "prereqx/corpus_io.hpp"
#include "prereqx/wiki_features.hpp"

namespace prereqx {

inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string features_to_csv(const FeatureTable& table) {
    std::string out = "target,candidate,label";
    for (const auto& name : table.schema) out += "," + name;
    out += "\n";
    for (const auto& row : table.rows) {
        out += row.target + "," + row.candidate + ",";
        out += row.label ? std::to_string(*row.label) : std::string{};
        for (double v : row.values) out += "," + format_double(v);
        out += "\n";
    }
    return out;
}

inline FeatureTable features_from_csv(const std::filesystem::path& path) {
    FeatureTable table;
    auto lines = detail::read_lines(path);
    if (lines.empty()) throw Error("empty features file '" + path.string() + "'");
    auto header = detail::split_csv_line(lines.front());
    if (header.size() < 3 || header[0] != "target" || header[1] != "candidate" || header[2] != "label")
        throw Error("features file must start with 'target,candidate,label'");
    table.schema.assign(header.begin() + 3, header.end());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (detail::trim(lines[i]).empty()) continue;
        auto fields = detail::split_csv_line(lines[i]);
        if (fields.size() != header.size())
            throw Error("features line " + std::to_string(i + 1) + ": wrong field count");
        FeatureRow row;
        row.target = fields[0];
        row.candidate = fields[1];
        if (!fields[2].empty()) {
            if (fields[2] != "0" && fields[2] != "1")
                throw Error("features line " + std::to_string(i + 1) + ": label must be 0, 1 or empty");
            row.label = fields[2] == "1" ? 1 : 0;
        }
        for (std::size_t f = 3; f < fields.size(); ++f) {
            char* end = nullptr;
            double v = std::strtod(fields[f].c_str(), &end);
            if (end == fields[f].c_str())
                throw Error("features line " + std::to_string(i + 1) + ": bad number '" + fields[f] + "'");
            row.values.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
}

}  // namespace prereqx
