#include "cges/graph.hpp"

#include <doctest.h>

#include "cges/enumeration.hpp"
#include "cges/errors.hpp"
#include "cges/rng.hpp"
#include "oracles.hpp"

using namespace cges;

TEST_CASE("dag rejects self-loops, duplicates and cycles") {
    Dag dag(3);
    dag.add_edge(0, 1);
    dag.add_edge(1, 2);
    CHECK_THROWS_AS(dag.add_edge(0, 0), Error);
    CHECK_THROWS_AS(dag.add_edge(0, 1), Error);
    CHECK_THROWS_AS(dag.add_edge(2, 0), CycleError);
    CHECK(dag.edge_count() == 2);
    CHECK(dag.topological_order() == std::vector<int>{0, 1, 2});
}

TEST_CASE("dag_to_cpdag on a chain leaves both edges undirected") {
    const Dag chain = Dag::from_edges(3, {{0, 1}, {1, 2}});
    const Cpdag cpdag = dag_to_cpdag(chain);
    CHECK(cpdag.undirected_edge_count() == 2);
    CHECK(cpdag.has_undirected(0, 1));
    CHECK(cpdag.has_undirected(1, 2));
}

TEST_CASE("dag_to_cpdag keeps a collider directed") {
    const Dag collider = Dag::from_edges(3, {{0, 1}, {2, 1}});
    const Cpdag cpdag = dag_to_cpdag(collider);
    CHECK(cpdag.directed_edge_count() == 2);
    CHECK(cpdag.has_directed(0, 1));
    CHECK(cpdag.has_directed(2, 1));
}

TEST_CASE("dag_to_cpdag matches class intersection on every DAG up to 4 nodes") {
    for (int n = 1; n <= 4; ++n) {
        const std::vector<Dag> all = enumerate_all_dags(n);
        for (const Dag& dag : all) {
            CHECK(dag_to_cpdag(dag) ==
                  oracles::cpdag_by_class_intersection(dag, all));
        }
    }
}

TEST_CASE("dag_to_cpdag is constant on each equivalence class") {
    const std::vector<Dag> all = enumerate_all_dags(4);
    std::map<std::pair<oracles::Skeleton, oracles::VStructures>, Cpdag> seen;
    for (const Dag& dag : all) {
        const auto key = std::make_pair(oracles::skeleton_of(dag),
                                        oracles::v_structures_of(dag));
        const Cpdag cpdag = dag_to_cpdag(dag);
        const auto [it, inserted] = seen.emplace(key, cpdag);
        if (!inserted) CHECK(cpdag == it->second);
    }
}

TEST_CASE("known DAG counts confirm the enumerator") {
    CHECK(enumerate_all_dags(1).size() == 1);
    CHECK(enumerate_all_dags(2).size() == 3);
    CHECK(enumerate_all_dags(3).size() == 25);
    CHECK(enumerate_all_dags(4).size() == 543);
}

TEST_CASE("pdag_to_dag orients an undirected triangle without new v-structures") {
    Cpdag triangle(3);
    triangle.add_undirected(0, 1);
    triangle.add_undirected(1, 2);
    triangle.add_undirected(0, 2);
    const Dag extension = pdag_to_dag(triangle);
    CHECK(extension.edge_count() == 3);
    CHECK(oracles::v_structures_of(extension).empty());
    CHECK(oracles::skeleton_of(extension) == oracles::skeleton_of(triangle));
}

TEST_CASE("pdag_to_dag avoids creating a v-structure") {
    // 0 -> 1, 1 - 2: orienting 2 -> 1 would create 0 -> 1 <- 2.
    Cpdag pdag(3);
    pdag.add_directed(0, 1);
    pdag.add_undirected(1, 2);
    const Dag extension = pdag_to_dag(pdag);
    CHECK(extension.has_edge(1, 2));
    CHECK_FALSE(extension.has_edge(2, 1));
}

TEST_CASE("pdag_to_dag fails on the chordless undirected 4-cycle") {
    Cpdag cycle(4);
    cycle.add_undirected(0, 1);
    cycle.add_undirected(1, 2);
    cycle.add_undirected(2, 3);
    cycle.add_undirected(3, 0);
    CHECK_THROWS_AS(pdag_to_dag(cycle), NoConsistentExtension);
}

TEST_CASE("round trip preserves skeleton and v-structures") {
    // Exhaustive to 4 nodes, random at 10.
    for (int n = 1; n <= 4; ++n) {
        for (const Dag& dag : enumerate_all_dags(n)) {
            const Dag back = pdag_to_dag(dag_to_cpdag(dag));
            CHECK(oracles::skeleton_of(back) == oracles::skeleton_of(dag));
            CHECK(oracles::v_structures_of(back) == oracles::v_structures_of(dag));
        }
    }
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const Dag dag = oracles::random_dag(rng, 10, 0.3);
        const Dag back = pdag_to_dag(dag_to_cpdag(dag));
        CHECK(oracles::skeleton_of(back) == oracles::skeleton_of(dag));
        CHECK(oracles::v_structures_of(back) == oracles::v_structures_of(dag));
    }
}

TEST_CASE("d-separation basics") {
    const Dag chain = Dag::from_edges(3, {{0, 1}, {1, 2}});
    CHECK(d_separated(chain, 0, 2, {1}));
    CHECK_FALSE(d_separated(chain, 0, 2, {}));

    const Dag collider = Dag::from_edges(3, {{0, 1}, {2, 1}});
    CHECK(d_separated(collider, 0, 2, {}));
    CHECK_FALSE(d_separated(collider, 0, 2, {1}));
}

TEST_CASE("d-separation matches the path-enumeration oracle on random DAGs") {
    Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const Dag dag = oracles::random_dag(rng, 6, 0.4);
        for (int x = 0; x < 6; ++x) {
            for (int y = x + 1; y < 6; ++y) {
                for (std::uint32_t mask = 0; mask < 64; ++mask) {
                    if (mask & ((1u << x) | (1u << y))) continue;
                    std::set<int> z;
                    for (int v = 0; v < 6; ++v)
                        if (mask & (1u << v)) z.insert(v);
                    const bool expected = oracles::d_separated_by_paths(dag, x, y, z);
                    CHECK(d_separated(dag, x, y, z) == expected);
                    CHECK(d_separated(dag, y, x, z) == expected);  // symmetry
                }
            }
        }
    }
}

TEST_CASE("na_set basics") {
    CHECK(na_set(Cpdag(3), 1, 0).empty());

    // y - w, w - x: w is an undirected neighbor of y adjacent to x.
    Cpdag g(3);
    g.add_undirected(1, 2);
    g.add_undirected(2, 0);
    CHECK(na_set(g, 1, 0) == std::set<int>{2});
}

TEST_CASE("validity_insert examples") {
    CHECK(validity_insert(Cpdag(3), 0, 1, {}));

    // Path 1 - 2 - 0: na_set(1, 0) = {2} blocks the semi-directed path.
    Cpdag g(3);
    g.add_undirected(1, 2);
    g.add_undirected(2, 0);
    CHECK(validity_insert(g, 0, 1, {}));

    // Two mutually non-adjacent candidates break the clique condition.
    Cpdag h(4);
    h.add_undirected(1, 2);
    h.add_undirected(1, 3);
    CHECK_FALSE(validity_insert(h, 0, 1, {2, 3}));
}

TEST_CASE("validity_delete examples") {
    Cpdag g(3);
    g.add_undirected(0, 1);
    CHECK(validity_delete(g, 0, 1, {}));  // empty clique

    Cpdag h(4);
    h.add_undirected(0, 1);
    h.add_undirected(1, 2);
    h.add_undirected(2, 0);
    CHECK(validity_delete(h, 0, 1, {}));  // singleton {2}
}

TEST_CASE("validity checks agree with definition scans on all CPDAGs up to 5 nodes") {
    // One CPDAG per equivalence class keeps the loop tight.
    for (int n = 2; n <= 5; ++n) {
        std::set<std::pair<oracles::Skeleton, oracles::VStructures>> seen;
        for (const Dag& dag : enumerate_all_dags(n)) {
            if (!seen.insert({oracles::skeleton_of(dag),
                              oracles::v_structures_of(dag)})
                     .second)
                continue;
            const Cpdag g = dag_to_cpdag(dag);
            for (int x = 0; x < n; ++x) {
                for (int y = 0; y < n; ++y) {
                    if (x == y) continue;
                    if (!g.adjacent(x, y)) {
                        std::vector<int> eligible;
                        for (int w : g.neighbors(y))
                            if (!g.adjacent(w, x)) eligible.push_back(w);
                        for (std::uint32_t mask = 0;
                             mask < (1u << eligible.size()); ++mask) {
                            std::set<int> t;
                            for (std::size_t b = 0; b < eligible.size(); ++b)
                                if (mask & (1u << b)) t.insert(eligible[b]);
                            CHECK(validity_insert(g, x, y, t) ==
                                  oracles::valid_insert_by_definition(g, x, y, t));
                        }
                    } else if (g.has_directed(x, y) || g.has_undirected(x, y)) {
                        std::vector<int> eligible;
                        for (int w : g.neighbors(y))
                            if (g.adjacent(w, x)) eligible.push_back(w);
                        for (std::uint32_t mask = 0;
                             mask < (1u << eligible.size()); ++mask) {
                            std::set<int> h;
                            for (std::size_t b = 0; b < eligible.size(); ++b)
                                if (mask & (1u << b)) h.insert(eligible[b]);
                            CHECK(validity_delete(g, x, y, h) ==
                                  oracles::valid_delete_by_definition(g, x, y, h));
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("non_descendants") {
    const Dag chain = Dag::from_edges(3, {{0, 1}, {1, 2}});
    CHECK(non_descendants(chain, 2) == std::set<int>{0, 1});
    CHECK(non_descendants(chain, 0).empty());

    Dag with_isolated(4);
    with_isolated.add_edge(0, 1);
    CHECK(non_descendants(with_isolated, 3) == std::set<int>{0, 1, 2});

    Rng rng(3);
    for (int trial = 0; trial < 25; ++trial) {
        const Dag dag = oracles::random_dag(rng, 7, 0.35);
        for (int i = 0; i < 7; ++i) {
            // Reachability complement computed directly.
            std::set<int> expected;
            for (int j = 0; j < 7; ++j) {
                if (j == i) continue;
                std::vector<int> stack{i};
                std::set<int> reach{i};
                bool found = false;
                while (!stack.empty() && !found) {
                    const int v = stack.back();
                    stack.pop_back();
                    for (int c : dag.children(v)) {
                        if (c == j) found = true;
                        if (reach.insert(c).second) stack.push_back(c);
                    }
                }
                if (!found) expected.insert(j);
            }
            CHECK(non_descendants(dag, i) == expected);
        }
    }
}
