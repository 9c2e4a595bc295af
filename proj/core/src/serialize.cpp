#include "cges/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cges/errors.hpp"

namespace cges {

namespace fs = std::filesystem;
using nlohmann::json;

void write_file_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    fs::path dir = target.parent_path();
    if (dir.empty()) dir = ".";
    const fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("rename to " + path + " failed: " + ec.message());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::vector<std::string> default_names(int node_count) {
    std::vector<std::string> names;
    names.reserve(node_count);
    for (int i = 0; i < node_count; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

namespace {

std::vector<std::string> resolve_names(int n, const std::vector<std::string>& names) {
    if (names.empty()) return default_names(n);
    if (static_cast<int>(names.size()) != n)
        throw Error("graph serialization: name list does not match node count");
    return names;
}

json graph_to_json_impl(int n, const std::vector<std::pair<int, int>>& directed,
                        const std::vector<std::pair<int, int>>& undirected,
                        const std::vector<std::string>& names) {
    json doc;
    doc["nodes"] = names;
    json edges = json::array();
    for (const auto& [from, to] : directed)
        edges.push_back({{"from", names[from]}, {"to", names[to]}, {"directed", true}});
    for (const auto& [a, b] : undirected)
        edges.push_back({{"from", names[a]}, {"to", names[b]}, {"directed", false}});
    doc["edges"] = std::move(edges);
    (void)n;
    return doc;
}

struct ParsedGraph {
    std::vector<std::string> names;
    std::vector<std::pair<int, int>> directed;
    std::vector<std::pair<int, int>> undirected;
};

ParsedGraph parse_graph(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("graph document: ") + e.what());
    }
    if (!doc.contains("nodes") || !doc.contains("edges"))
        throw ParseError("graph document: missing 'nodes' or 'edges'");
    ParsedGraph out;
    std::map<std::string, int> index;
    for (const auto& name : doc["nodes"]) {
        const std::string s = name.get<std::string>();
        if (index.count(s)) throw ParseError("graph document: duplicate node " + s);
        index[s] = static_cast<int>(out.names.size());
        out.names.push_back(s);
    }
    for (const auto& edge : doc["edges"]) {
        const std::string from = edge.at("from").get<std::string>();
        const std::string to = edge.at("to").get<std::string>();
        const bool directed = edge.value("directed", true);
        if (!index.count(from) || !index.count(to))
            throw ParseError("graph document: edge endpoint not in nodes");
        if (directed)
            out.directed.emplace_back(index[from], index[to]);
        else
            out.undirected.emplace_back(index[from], index[to]);
    }
    return out;
}

}  // namespace

std::string cpdag_to_json(const Cpdag& graph, const std::vector<std::string>& names) {
    const auto resolved = resolve_names(graph.node_count(), names);
    return graph_to_json_impl(graph.node_count(), graph.directed_edges(),
                              graph.undirected_edges(), resolved)
               .dump(2) +
           "\n";
}

std::string dag_to_json(const Dag& graph, const std::vector<std::string>& names) {
    const auto resolved = resolve_names(graph.node_count(), names);
    return graph_to_json_impl(graph.node_count(), graph.edges(), {}, resolved)
               .dump(2) +
           "\n";
}

Cpdag cpdag_from_json(const std::string& text, std::vector<std::string>* names_out) {
    const ParsedGraph parsed = parse_graph(text);
    Cpdag out(static_cast<int>(parsed.names.size()));
    for (const auto& [from, to] : parsed.directed) out.add_directed(from, to);
    for (const auto& [a, b] : parsed.undirected) out.add_undirected(a, b);
    if (names_out) *names_out = parsed.names;
    return out;
}

Dag dag_from_json(const std::string& text, std::vector<std::string>* names_out) {
    const ParsedGraph parsed = parse_graph(text);
    if (!parsed.undirected.empty())
        throw ParseError("expected a DAG but found undirected edges");
    Dag out = Dag::from_edges(static_cast<int>(parsed.names.size()), parsed.directed);
    if (names_out) *names_out = parsed.names;
    return out;
}

void save_cpdag(const Cpdag& graph, const std::string& path,
                const std::vector<std::string>& names) {
    write_file_atomic(path, cpdag_to_json(graph, names));
}

void save_dag(const Dag& graph, const std::string& path,
              const std::vector<std::string>& names) {
    write_file_atomic(path, dag_to_json(graph, names));
}

Cpdag load_cpdag(const std::string& path, std::vector<std::string>* names_out) {
    return cpdag_from_json(read_file(path), names_out);
}

Dag load_dag(const std::string& path, std::vector<std::string>* names_out) {
    return dag_from_json(read_file(path), names_out);
}

}  // namespace cges
