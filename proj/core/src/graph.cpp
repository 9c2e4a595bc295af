#include "cges/graph.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <queue>
#include <tuple>

#include "cges/errors.hpp"

namespace cges {

// ---------------------------------------------------------------------------
// Dag

Dag::Dag(int node_count) : node_count_(node_count) {
    if (node_count < 0) throw Error("Dag: negative node count");
    parents_.resize(node_count);
    children_.resize(node_count);
}

Dag Dag::from_edges(int node_count,
                    const std::vector<std::pair<int, int>>& edges) {
    Dag dag(node_count);
    for (const auto& [from, to] : edges) dag.add_edge(from, to);
    return dag;
}

void Dag::check_node(int node) const {
    if (node < 0 || node >= node_count_)
        throw Error("Dag: node index out of range");
}

bool Dag::creates_cycle(int parent, int child) const {
    // Cycle iff parent is already reachable from child.
    std::vector<char> seen(node_count_, 0);
    std::deque<int> queue{child};
    seen[child] = 1;
    while (!queue.empty()) {
        const int node = queue.front();
        queue.pop_front();
        if (node == parent) return true;
        for (int next : children_[node]) {
            if (!seen[next]) {
                seen[next] = 1;
                queue.push_back(next);
            }
        }
    }
    return false;
}

void Dag::add_edge(int parent, int child) {
    check_node(parent);
    check_node(child);
    if (parent == child) throw Error("Dag: self-loop");
    if (has_edge(parent, child)) throw Error("Dag: duplicate edge");
    if (has_edge(child, parent) || creates_cycle(parent, child))
        throw CycleError("Dag: edge would create a directed cycle");
    parents_[child].insert(parent);
    children_[parent].insert(child);
    ++edge_count_;
}

bool Dag::has_edge(int parent, int child) const {
    check_node(parent);
    check_node(child);
    return children_[parent].count(child) > 0;
}

std::vector<int> Dag::topological_order() const {
    std::vector<int> indegree(node_count_, 0);
    for (int v = 0; v < node_count_; ++v)
        indegree[v] = static_cast<int>(parents_[v].size());
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int v = 0; v < node_count_; ++v)
        if (indegree[v] == 0) ready.push(v);
    std::vector<int> order;
    order.reserve(node_count_);
    while (!ready.empty()) {
        const int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int c : children_[v])
            if (--indegree[c] == 0) ready.push(c);
    }
    if (static_cast<int>(order.size()) != node_count_)
        throw CycleError("Dag: graph contains a cycle");
    return order;
}

std::vector<std::pair<int, int>> Dag::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (int v = 0; v < node_count_; ++v)
        for (int c : children_[v]) out.emplace_back(v, c);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Cpdag

Cpdag::Cpdag(int node_count) : node_count_(node_count) {
    if (node_count < 0) throw Error("Cpdag: negative node count");
    parents_.resize(node_count);
    children_.resize(node_count);
    neighbors_.resize(node_count);
}

Cpdag Cpdag::from_dag(const Dag& dag) {
    Cpdag out(dag.node_count());
    for (const auto& [from, to] : dag.edges()) out.add_directed(from, to);
    return out;
}

void Cpdag::check_node(int node) const {
    if (node < 0 || node >= node_count_)
        throw Error("Cpdag: node index out of range");
}

void Cpdag::add_directed(int parent, int child) {
    check_node(parent);
    check_node(child);
    if (parent == child) throw Error("Cpdag: self-loop");
    if (adjacent(parent, child)) throw Error("Cpdag: pair already joined");
    parents_[child].insert(parent);
    children_[parent].insert(child);
    ++directed_count_;
}

void Cpdag::add_undirected(int a, int b) {
    check_node(a);
    check_node(b);
    if (a == b) throw Error("Cpdag: self-loop");
    if (adjacent(a, b)) throw Error("Cpdag: pair already joined");
    neighbors_[a].insert(b);
    neighbors_[b].insert(a);
    ++undirected_count_;
}

void Cpdag::remove_between(int a, int b) {
    check_node(a);
    check_node(b);
    if (has_directed(a, b)) {
        children_[a].erase(b);
        parents_[b].erase(a);
        --directed_count_;
    } else if (has_directed(b, a)) {
        children_[b].erase(a);
        parents_[a].erase(b);
        --directed_count_;
    } else if (has_undirected(a, b)) {
        neighbors_[a].erase(b);
        neighbors_[b].erase(a);
        --undirected_count_;
    }
}

void Cpdag::orient(int a, int b) {
    if (!has_undirected(a, b)) throw Error("Cpdag: orient needs an undirected edge");
    neighbors_[a].erase(b);
    neighbors_[b].erase(a);
    --undirected_count_;
    parents_[b].insert(a);
    children_[a].insert(b);
    ++directed_count_;
}

bool Cpdag::has_directed(int parent, int child) const {
    check_node(parent);
    check_node(child);
    return children_[parent].count(child) > 0;
}

bool Cpdag::has_undirected(int a, int b) const {
    check_node(a);
    check_node(b);
    return neighbors_[a].count(b) > 0;
}

bool Cpdag::adjacent(int a, int b) const {
    return has_directed(a, b) || has_directed(b, a) || has_undirected(a, b);
}

std::set<int> Cpdag::adjacent_nodes(int node) const {
    check_node(node);
    std::set<int> out = neighbors_[node];
    out.insert(parents_[node].begin(), parents_[node].end());
    out.insert(children_[node].begin(), children_[node].end());
    return out;
}

std::vector<std::pair<int, int>> Cpdag::directed_edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(directed_count_);
    for (int v = 0; v < node_count_; ++v)
        for (int c : children_[v]) out.emplace_back(v, c);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<int, int>> Cpdag::undirected_edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(undirected_count_);
    for (int v = 0; v < node_count_; ++v)
        for (int w : neighbors_[v])
            if (v < w) out.emplace_back(v, w);
    std::sort(out.begin(), out.end());
    return out;
}

bool Cpdag::is_clique(const std::set<int>& nodes) const {
    for (int a : nodes)
        for (int b : nodes)
            if (a < b && !adjacent(a, b)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// dag_to_cpdag: Chickering's edge ordering + compelled/reversible labeling.

namespace {

enum class Label { Unknown, Compelled, Reversible };

struct EdgeKey {
    int from, to;
    bool operator<(const EdgeKey& o) const {
        return std::tie(from, to) < std::tie(o.from, o.to);
    }
};

}  // namespace

Cpdag dag_to_cpdag(const Dag& dag) {
    const int n = dag.node_count();
    const std::vector<int> topo = dag.topological_order();
    std::vector<int> position(n);
    for (int i = 0; i < n; ++i) position[topo[i]] = i;

    // Total order over edges: repeatedly pick the lowest-position node y with
    // an unordered incoming edge, then the highest-position unordered parent
    // x of y.
    std::map<EdgeKey, int> order;
    {
        std::vector<std::vector<int>> pending(n);  // parents by position, ascending
        for (int y = 0; y < n; ++y) {
            std::vector<int> ps(dag.parents(y).begin(), dag.parents(y).end());
            std::sort(ps.begin(), ps.end(),
                      [&](int a, int b) { return position[a] < position[b]; });
            pending[y] = std::move(ps);
        }
        int next = 0;
        const int total = dag.edge_count();
        while (next < total) {
            int y = -1;
            for (int i = 0; i < n; ++i) {
                if (!pending[topo[i]].empty()) {
                    y = topo[i];
                    break;
                }
            }
            const int x = pending[y].back();
            pending[y].pop_back();
            order[{x, y}] = next++;
        }
    }

    std::map<EdgeKey, Label> label;
    for (const auto& [edge, _] : order) label[edge] = Label::Unknown;

    auto lowest_unknown = [&]() -> const EdgeKey* {
        const EdgeKey* best = nullptr;
        int best_order = -1;
        for (const auto& [edge, lab] : label) {
            if (lab != Label::Unknown) continue;
            const int o = order.at(edge);
            if (best == nullptr || o < best_order) {
                best = &edge;
                best_order = o;
            }
        }
        return best;
    };

    while (const EdgeKey* next = lowest_unknown()) {
        const int x = next->from;
        const int y = next->to;
        bool resolved = false;
        for (int w : dag.parents(x)) {
            if (label.at({w, x}) != Label::Compelled) continue;
            if (!dag.has_edge(w, y)) {
                // w -> x compelled and w not a parent of y: everything into y
                // is compelled.
                for (int p : dag.parents(y)) label[{p, y}] = Label::Compelled;
                resolved = true;
                break;
            }
            label[{w, y}] = Label::Compelled;
        }
        if (resolved) continue;
        bool external_parent = false;
        for (int z : dag.parents(y)) {
            if (z != x && !dag.has_edge(z, x)) {
                external_parent = true;
                break;
            }
        }
        const Label verdict = external_parent ? Label::Compelled : Label::Reversible;
        label[{x, y}] = verdict;
        for (int p : dag.parents(y))
            if (label.at({p, y}) == Label::Unknown) label[{p, y}] = verdict;
    }

    Cpdag out(n);
    for (const auto& [edge, lab] : label) {
        if (lab == Label::Compelled)
            out.add_directed(edge.from, edge.to);
        else
            out.add_undirected(edge.from, edge.to);
    }
    return out;
}

// ---------------------------------------------------------------------------
// pdag_to_dag: sink peeling (Dor & Tarsi). A node can be peeled when it has
// no outgoing directed edges and each of its undirected neighbors is adjacent
// to all of its other adjacent nodes.

Dag pdag_to_dag(const Cpdag& pdag) {
    const int n = pdag.node_count();
    Cpdag work = pdag;
    Dag out(n);
    for (const auto& [from, to] : pdag.directed_edges()) out.add_edge(from, to);

    std::vector<char> removed(n, 0);
    int remaining = n;
    while (remaining > 0) {
        int picked = -1;
        for (int x = 0; x < n && picked < 0; ++x) {
            if (removed[x]) continue;
            if (!work.children(x).empty()) continue;
            const std::set<int> adj = work.adjacent_nodes(x);
            bool ok = true;
            for (int y : work.neighbors(x)) {
                for (int other : adj) {
                    if (other != y && !work.adjacent(y, other)) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
            if (ok) picked = x;
        }
        if (picked < 0)
            throw NoConsistentExtension(
                "pdag_to_dag: no consistent extension exists");
        for (int y : std::set<int>(work.neighbors(picked).begin(),
                                   work.neighbors(picked).end())) {
            out.add_edge(y, picked);
            work.remove_between(y, picked);
        }
        for (int p : std::set<int>(work.parents(picked).begin(),
                                   work.parents(picked).end()))
            work.remove_between(p, picked);
        removed[picked] = 1;
        --remaining;
    }
    return out;
}

// ---------------------------------------------------------------------------
// d-separation via active-trail reachability.

bool d_separated(const Dag& dag, int x, int y, const std::set<int>& z) {
    if (x == y) throw Error("d_separated: x == y");
    if (z.count(x) || z.count(y))
        throw Error("d_separated: endpoints must not be conditioned on");
    const int n = dag.node_count();

    // Nodes in z or with a descendant in z (collider openers).
    std::vector<char> opens(n, 0);
    {
        std::deque<int> queue;
        for (int v : z) {
            opens[v] = 1;
            queue.push_back(v);
        }
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (int p : dag.parents(v)) {
                if (!opens[p]) {
                    opens[p] = 1;
                    queue.push_back(p);
                }
            }
        }
    }

    // State (node, arrived-from-child?) BFS; "up" means the trail may leave
    // through parents and children, "down" means we entered along an edge
    // into the node.
    constexpr int kUp = 0, kDown = 1;
    std::vector<std::array<char, 2>> visited(n, {0, 0});
    std::deque<std::pair<int, int>> queue{{x, kUp}};
    while (!queue.empty()) {
        const auto [node, dir] = queue.front();
        queue.pop_front();
        if (visited[node][dir]) continue;
        visited[node][dir] = 1;
        if (node == y) return false;  // active trail reaches y
        const bool in_z = z.count(node) > 0;
        if (dir == kUp && !in_z) {
            for (int p : dag.parents(node)) queue.emplace_back(p, kUp);
            for (int c : dag.children(node)) queue.emplace_back(c, kDown);
        } else if (dir == kDown) {
            if (!in_z)
                for (int c : dag.children(node)) queue.emplace_back(c, kDown);
            if (opens[node])
                for (int p : dag.parents(node)) queue.emplace_back(p, kUp);
        }
    }
    return true;
}

// ---------------------------------------------------------------------------

std::set<int> na_set(const Cpdag& cpdag, int y, int x) {
    std::set<int> out;
    for (int w : cpdag.neighbors(y))
        if (cpdag.adjacent(w, x)) out.insert(w);
    return out;
}

bool semi_directed_path_exists(const Cpdag& cpdag, int from, int to,
                               const std::set<int>& blocked) {
    if (from == to) return true;
    const int n = cpdag.node_count();
    std::vector<char> seen(n, 0);
    std::deque<int> queue{from};
    seen[from] = 1;
    while (!queue.empty()) {
        const int node = queue.front();
        queue.pop_front();
        auto visit = [&](int next) {
            if (seen[next]) return false;
            if (next == to) return true;
            if (blocked.count(next)) return false;
            seen[next] = 1;
            queue.push_back(next);
            return false;
        };
        for (int c : cpdag.children(node))
            if (visit(c)) return true;
        for (int w : cpdag.neighbors(node))
            if (visit(w)) return true;
    }
    return false;
}

bool validity_insert(const Cpdag& cpdag, int x, int y, const std::set<int>& t) {
    std::set<int> block = na_set(cpdag, y, x);
    block.insert(t.begin(), t.end());
    if (!cpdag.is_clique(block)) return false;
    return !semi_directed_path_exists(cpdag, y, x, block);
}

bool validity_delete(const Cpdag& cpdag, int x, int y, const std::set<int>& h) {
    std::set<int> rest = na_set(cpdag, y, x);
    for (int v : h) rest.erase(v);
    return cpdag.is_clique(rest);
}

std::set<int> non_descendants(const Dag& dag, int i) {
    const int n = dag.node_count();
    std::vector<char> reach(n, 0);
    std::deque<int> queue{i};
    reach[i] = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int c : dag.children(v)) {
            if (!reach[c]) {
                reach[c] = 1;
                queue.push_back(c);
            }
        }
    }
    std::set<int> out;
    for (int v = 0; v < n; ++v)
        if (!reach[v]) out.insert(v);
    return out;
}

}  // namespace cges
