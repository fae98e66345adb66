#pragma once

// Prerequisite DAG export: one edge from prerequisite to dependent for every
// matrix entry above the threshold, with an acyclicity check. Emits DOT and
// a structured JSON document.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "prereqx/prereq_matrix.hpp"

namespace prereqx {

struct DagEdge {
    std::string from;  // prerequisite
    std::string to;    // dependent
    double weight = 0.0;
};

struct DagDocument {
    std::vector<std::string> nodes;
    std::vector<DagEdge> edges;
    double theta = 0.0;
};

// Kahn topological order; empty when the edge set has a cycle.
inline std::optional<std::vector<std::string>> topological_order(
    const std::vector<std::string>& nodes, const std::vector<DagEdge>& edges) {
    std::map<std::string, std::size_t> in_degree;
    std::map<std::string, std::vector<std::string>> adjacency;
    for (const auto& n : nodes) in_degree[n] = 0;
    for (const auto& e : edges) {
        adjacency[e.from].push_back(e.to);
        ++in_degree[e.to];
    }
    std::vector<std::string> ready;
    for (const auto& [n, d] : in_degree)
        if (d == 0) ready.push_back(n);
    std::vector<std::string> order;
    while (!ready.empty()) {
        std::string n = ready.back();
        ready.pop_back();
        order.push_back(n);
        for (const auto& m : adjacency[n])
            if (--in_degree[m] == 0) ready.push_back(m);
    }
    if (order.size() != nodes.size()) return std::nullopt;
    return order;
}

// Requires an ordered-stage matrix, whose filter already guarantees
// acyclicity; a cycle here is an internal invariant failure.
inline DagDocument export_dag(const PrereqMatrix& m, double theta) {
    if (m.stage != MatrixStage::Ordered) throw Error("export_dag expects an ordered-stage matrix");
    DagDocument doc;
    doc.theta = theta;
    doc.nodes = m.concepts;
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j)
            if (m.values[i][j] > theta)
                doc.edges.push_back({m.concepts[j], m.concepts[i], m.values[i][j]});
    if (!topological_order(doc.nodes, doc.edges))
        throw std::logic_error("prerequisite graph has a cycle after ordering filter");
    return doc;
}

inline std::string escape_dot(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string to_dot(const DagDocument& doc) {
    std::string out = "digraph prerequisites {\n";
    for (const auto& n : doc.nodes) out += "  \"" + escape_dot(n) + "\";\n";
    for (const auto& e : doc.edges) {
        out += "  \"" + escape_dot(e.from) + "\" -> \"" + escape_dot(e.to) + "\" [weight=" +
               std::to_string(e.weight) + "];\n";
    }
    out += "}\n";
    return out;
}

inline nlohmann::json dag_to_json(const DagDocument& doc) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : doc.edges)
        edges.push_back({{"from", e.from}, {"to", e.to}, {"weight", e.weight}});
    return {{"theta", doc.theta}, {"nodes", doc.nodes}, {"edges", edges}};
}

}  // namespace prereqx
