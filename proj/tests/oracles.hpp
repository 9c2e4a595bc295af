// Independent reference implementations used to cross-check the library.
// Everything here is deliberately naive: path enumeration, definition scans,
// and equivalence-class intersection, with no shared logic with the
// algorithms under test.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "cges/graph.hpp"
#include "cges/rng.hpp"

namespace oracles {

using cges::Cpdag;
using cges::Dag;

// All simple paths between x and y over the skeleton; a path is active given
// z iff every collider on it is in z or has a descendant in z, and every
// non-collider is outside z. d-separated iff no path is active.
inline bool d_separated_by_paths(const Dag& dag, int x, int y,
                                 const std::set<int>& z) {
    const int n = dag.node_count();
    std::vector<std::set<int>> descendants(n);
    for (int v = 0; v < n; ++v) {
        std::vector<int> stack{v};
        while (!stack.empty()) {
            const int a = stack.back();
            stack.pop_back();
            for (int c : dag.children(a)) {
                if (descendants[v].insert(c).second) stack.push_back(c);
            }
        }
    }
    auto opens_collider = [&](int v) {
        if (z.count(v)) return true;
        for (int d : descendants[v])
            if (z.count(d)) return true;
        return false;
    };

    std::vector<int> path{x};
    std::vector<char> on_path(n, 0);
    on_path[x] = 1;
    bool found_active = false;

    std::function<void()> extend = [&]() {
        if (found_active) return;
        const int tip = path.back();
        std::set<int> nexts(dag.children(tip).begin(), dag.children(tip).end());
        nexts.insert(dag.parents(tip).begin(), dag.parents(tip).end());
        for (int nx : nexts) {
            if (on_path[nx]) continue;
            path.push_back(nx);
            if (nx == y) {
                bool active = true;
                for (std::size_t i = 1; i + 1 < path.size(); ++i) {
                    const int prev = path[i - 1], mid = path[i], next = path[i + 1];
                    const bool collider =
                        dag.has_edge(prev, mid) && dag.has_edge(next, mid);
                    if (collider ? !opens_collider(mid) : z.count(mid) > 0) {
                        active = false;
                        break;
                    }
                }
                if (active) found_active = true;
            } else {
                on_path[nx] = 1;
                extend();
                on_path[nx] = 0;
            }
            path.pop_back();
            if (found_active) return;
        }
    };
    extend();
    return !found_active;
}

using Skeleton = std::set<std::pair<int, int>>;
using VStructures = std::set<std::tuple<int, int, int>>;

inline Skeleton skeleton_of(const Dag& dag) {
    Skeleton out;
    for (const auto& [a, b] : dag.edges())
        out.insert({std::min(a, b), std::max(a, b)});
    return out;
}

inline VStructures v_structures_of(const Dag& dag) {
    VStructures out;
    const int n = dag.node_count();
    for (int mid = 0; mid < n; ++mid) {
        const auto& ps = dag.parents(mid);
        for (int a : ps)
            for (int c : ps)
                if (a < c && !dag.adjacent(a, c)) out.insert({a, mid, c});
    }
    return out;
}

inline Skeleton skeleton_of(const Cpdag& g) {
    Skeleton out;
    for (const auto& [a, b] : g.directed_edges())
        out.insert({std::min(a, b), std::max(a, b)});
    for (const auto& [a, b] : g.undirected_edges()) out.insert({a, b});
    return out;
}

// CPDAG by definition: group the full DAG enumeration into Markov
// equivalence classes by (skeleton, v-structures) and keep an orientation
// only where every class member agrees.
inline Cpdag cpdag_by_class_intersection(const Dag& dag,
                                         const std::vector<Dag>& all_dags) {
    const auto key = std::make_pair(skeleton_of(dag), v_structures_of(dag));
    std::vector<const Dag*> members;
    for (const Dag& candidate : all_dags)
        if (std::make_pair(skeleton_of(candidate), v_structures_of(candidate)) ==
            key)
            members.push_back(&candidate);
    Cpdag out(dag.node_count());
    for (const auto& [a, b] : key.first) {
        bool always_forward = true, always_backward = true;
        for (const Dag* member : members) {
            if (!member->has_edge(a, b)) always_forward = false;
            if (!member->has_edge(b, a)) always_backward = false;
        }
        if (always_forward)
            out.add_directed(a, b);
        else if (always_backward)
            out.add_directed(b, a);
        else
            out.add_undirected(a, b);
    }
    return out;
}

// Definition scans for operator validity.
inline bool valid_insert_by_definition(const Cpdag& g, int x, int y,
                                       const std::set<int>& t) {
    std::set<int> block;
    for (int w : g.neighbors(y))
        if (g.adjacent(w, x)) block.insert(w);
    block.insert(t.begin(), t.end());
    for (int a : block)
        for (int b : block)
            if (a < b && !g.adjacent(a, b)) return false;
    // Enumerate every semi-directed path y -> ... -> x and demand a blocker.
    std::vector<int> path{y};
    std::vector<char> on_path(g.node_count(), 0);
    on_path[y] = 1;
    bool unblocked = false;
    std::function<void()> extend = [&]() {
        if (unblocked) return;
        const int tip = path.back();
        std::set<int> nexts(g.children(tip).begin(), g.children(tip).end());
        nexts.insert(g.neighbors(tip).begin(), g.neighbors(tip).end());
        for (int nx : nexts) {
            if (on_path[nx]) continue;
            if (nx == x) {
                bool blocked = false;
                for (int node : path)
                    if (node != y && block.count(node)) blocked = true;
                if (!blocked) {
                    unblocked = true;
                    return;
                }
                continue;
            }
            path.push_back(nx);
            on_path[nx] = 1;
            extend();
            on_path[nx] = 0;
            path.pop_back();
            if (unblocked) return;
        }
    };
    extend();
    return !unblocked;
}

inline bool valid_delete_by_definition(const Cpdag& g, int x, int y,
                                       const std::set<int>& h) {
    std::set<int> rest;
    for (int w : g.neighbors(y))
        if (g.adjacent(w, x) && !h.count(w)) rest.insert(w);
    for (int a : rest)
        for (int b : rest)
            if (a < b && !g.adjacent(a, b)) return false;
    return true;
}

inline Dag random_dag(cges::Rng& rng, int n, double edge_prob) {
    const std::vector<int> order = rng.permutation(n);
    Dag dag(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < edge_prob) dag.add_edge(order[i], order[j]);
    return dag;
}

}  // namespace oracles
