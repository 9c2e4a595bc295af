#pragma once

#include <string>
#include <vector>

#include "cges/graph.hpp"

namespace cges {

/// Writes content to a temporary file in the target directory and renames it
/// into place, so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// Graph document: {"nodes": [names...], "edges": [{"from","to","directed"}]}.
/// Undirected edges appear once with directed=false and from < to in node
/// order. Node names default to x0..x{n-1} when not supplied.
std::string cpdag_to_json(const Cpdag& graph,
                          const std::vector<std::string>& names = {});
std::string dag_to_json(const Dag& graph,
                        const std::vector<std::string>& names = {});

Cpdag cpdag_from_json(const std::string& text,
                      std::vector<std::string>* names_out = nullptr);
/// Requires every edge to be directed.
Dag dag_from_json(const std::string& text,
                  std::vector<std::string>* names_out = nullptr);

void save_cpdag(const Cpdag& graph, const std::string& path,
                const std::vector<std::string>& names = {});
void save_dag(const Dag& graph, const std::string& path,
              const std::vector<std::string>& names = {});
Cpdag load_cpdag(const std::string& path,
                 std::vector<std::string>* names_out = nullptr);
Dag load_dag(const std::string& path,
             std::vector<std::string>* names_out = nullptr);

std::vector<std::string> default_names(int node_count);

}  // namespace cges
