#pragma once

#include <set>
#include <string>
#include <vector>

namespace cges {

/// Directed acyclic graph over dense 0-based node indices. Edges are stored
/// as parent/child adjacency sets; acyclicity is validated on construction
/// from an edge list and on demand via topological_order().
class Dag {
public:
    Dag() = default;
    explicit Dag(int node_count);

    static Dag from_edges(int node_count,
                          const std::vector<std::pair<int, int>>& edges);

    int node_count() const { return node_count_; }
    int edge_count() const { return edge_count_; }

    /// Adds parent -> child. Throws on self-loops, duplicates, or a created
    /// directed cycle.
    void add_edge(int parent, int child);
    bool has_edge(int parent, int child) const;

    const std::set<int>& parents(int node) const { return parents_[node]; }
    const std::set<int>& children(int node) const { return children_[node]; }
    bool adjacent(int a, int b) const {
        return has_edge(a, b) || has_edge(b, a);
    }

    /// Deterministic topological order (lowest index first among sources).
    std::vector<int> topological_order() const;

    /// All edges as (parent, child), sorted.
    std::vector<std::pair<int, int>> edges() const;

    bool operator==(const Dag& other) const = default;

private:
    void check_node(int node) const;
    bool creates_cycle(int parent, int child) const;

    int node_count_ = 0;
    int edge_count_ = 0;
    std::vector<std::set<int>> parents_;
    std::vector<std::set<int>> children_;
};

/// Partially directed graph used both for CPDAGs (canonical equivalence-class
/// representations) and for intermediate PDAGs during search. Directed and
/// undirected edges are disjoint on unordered pairs.
class Cpdag {
public:
    Cpdag() = default;
    explicit Cpdag(int node_count);

    static Cpdag from_dag(const Dag& dag);  // copies edges as directed

    int node_count() const { return node_count_; }
    int directed_edge_count() const { return directed_count_; }
    int undirected_edge_count() const { return undirected_count_; }
    /// Number of adjacencies (skeleton edges).
    int adjacency_count() const { return directed_count_ + undirected_count_; }

    void add_directed(int parent, int child);
    void add_undirected(int a, int b);
    /// Removes whatever edge joins a and b (directed either way or
    /// undirected); no-op when not adjacent.
    void remove_between(int a, int b);
    /// Replaces the undirected edge a - b by a -> b.
    void orient(int a, int b);

    bool has_directed(int parent, int child) const;
    bool has_undirected(int a, int b) const;
    bool adjacent(int a, int b) const;

    const std::set<int>& parents(int node) const { return parents_[node]; }
    const std::set<int>& children(int node) const { return children_[node]; }
    /// Undirected neighbors.
    const std::set<int>& neighbors(int node) const { return neighbors_[node]; }
    /// Nodes adjacent by any edge.
    std::set<int> adjacent_nodes(int node) const;

    std::vector<std::pair<int, int>> directed_edges() const;
    /// Undirected edges with first < second.
    std::vector<std::pair<int, int>> undirected_edges() const;

    /// True when every pair in the set is adjacent (a clique in the
    /// skeleton); the empty set and singletons qualify.
    bool is_clique(const std::set<int>& nodes) const;

    bool operator==(const Cpdag& other) const = default;

private:
    void check_node(int node) const;

    int node_count_ = 0;
    int directed_count_ = 0;
    int undirected_count_ = 0;
    std::vector<std::set<int>> parents_;
    std::vector<std::set<int>> children_;
    std::vector<std::set<int>> neighbors_;
};

/// Compelled-edge labeling: the CPDAG of the Markov equivalence class of
/// `dag`. An edge is directed in the result iff it has the same orientation
/// in every equivalent DAG.
Cpdag dag_to_cpdag(const Dag& dag);

/// Consistent extension: a DAG with the same skeleton that keeps every
/// directed edge of `pdag` and introduces no new v-structure. Deterministic
/// (lowest-index sink peeled first). Throws NoConsistentExtension.
Dag pdag_to_dag(const Cpdag& pdag);

/// Standard d-separation of x and y given z. Requires x != y and x,y not in z.
bool d_separated(const Dag& dag, int x, int y, const std::set<int>& z);

/// Undirected neighbors of y that are adjacent to x.
std::set<int> na_set(const Cpdag& cpdag, int y, int x);

/// Chickering's validity test for Insert(x, y, t): na_set(y,x) + t must be a
/// clique and must block every semi-directed path from y to x.
bool validity_insert(const Cpdag& cpdag, int x, int y, const std::set<int>& t);

/// Validity test for Delete(x, y, h): na_set(y,x) \ h must be a clique.
bool validity_delete(const Cpdag& cpdag, int x, int y, const std::set<int>& h);

/// Nodes j != i with no directed path i ~> j.
std::set<int> non_descendants(const Dag& dag, int i);

/// True when some semi-directed path (undirected steps or directed steps
/// taken parent -> child) leads from `from` to `to` without passing through
/// `blocked`. Endpoints are never treated as blocked.
bool semi_directed_path_exists(const Cpdag& cpdag, int from, int to,
                               const std::set<int>& blocked);

}  // namespace cges
