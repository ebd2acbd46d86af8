#include <gtest/gtest.h>

#include <map>

#include "regweight/generators.hpp"
#include "regweight/solver_t2.hpp"
#include "support.hpp"

using namespace regweight;

namespace {

std::vector<Vertex> ids(std::initializer_list<Vertex> v) { return v; }

/// Per-vertex end-state conditions and the weight classes of the 4-weighting.
void expect_end_state(const Graph& g, const T2Result& r) {
    const auto d = static_cast<std::int64_t>(r.degree);
    const auto s = testing_support::sums(g, r.weighting.values());
    const auto& p = r.partition;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (p.r2.contains(v)) {
            EXPECT_LT(s[v], 3 * d) << "(a) at " << v;
        }
        if (p.independent.contains(v)) {
            EXPECT_GE(s[v], 3 * d) << "(b) at " << v;
            bool touches_r1 = false;
            for (const auto& inc : g.incident(v)) touches_r1 |= p.r1.contains(inc.neighbor);
            if (touches_r1) {
                EXPECT_LT(s[v], 4 * d) << "(b') at " << v;
            }
        }
        if (p.r1.contains(v)) {
            EXPECT_TRUE(s[v] == 3 * d - 1 || s[v] == 4 * d) << "(b'') at " << v;
        }
    }
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        const auto& e = g.edge(id);
        const Weight w = r.weighting[id];
        if (p.r2.contains(e.u) && p.r2.contains(e.v)) {
            EXPECT_TRUE(w >= 1 && w <= 3);
        } else if (p.r1.contains(e.u) || p.r1.contains(e.v)) {
            EXPECT_TRUE(w >= 2 && w <= 4);
        } else {
            EXPECT_TRUE(w == 3 || w == 4);
        }
    }
    EXPECT_EQ(testing_support::conflicts(g, r.weighting.values()), 0u);
}

}  // namespace

TEST(GreedyMis, Examples) {
    EXPECT_EQ(greedy_mis(complete_graph(5)).members(), ids({0}));
    EXPECT_EQ(greedy_mis(cycle_graph(6)).members(), ids({0, 2, 4}));
    EXPECT_EQ(greedy_mis(cycle_graph(4)).members(), ids({0, 2}));
}

TEST(PartitionT2, Examples) {
    const auto c4 = cycle_graph(4);
    const auto a = partition_t2(c4, greedy_mis(c4));
    EXPECT_EQ(a.r1.members(), ids({1, 3}));
    EXPECT_TRUE(a.r2.empty());

    const auto k3 = complete_graph(3);
    const std::vector<Vertex> zero{0};
    const auto b = partition_t2(k3, VertexSubset(3, zero));
    EXPECT_TRUE(b.r1.empty());
    EXPECT_EQ(b.r2.members(), ids({1, 2}));

    const auto pg = petersen_graph();
    const auto c = partition_t2(pg, greedy_mis(pg));
    EXPECT_EQ(c.r1.size() + c.r2.size(), 10 - c.independent.size());
    for (const auto& e : pg.edges()) {
        EXPECT_FALSE(c.r1.contains(e.u) && c.r2.contains(e.v));
        EXPECT_FALSE(c.r2.contains(e.u) && c.r1.contains(e.v));
    }
}

TEST(PartitionT2, RejectsBadSets) {
    const auto c4 = cycle_graph(4);
    const std::vector<Vertex> adjacent{0, 1};
    const std::vector<Vertex> small{0};
    EXPECT_THROW(partition_t2(c4, VertexSubset(4, adjacent)), InvalidInput);
    EXPECT_THROW(partition_t2(c4, VertexSubset(4, small)), InvalidInput);
}

TEST(OrderComponent, PathComponent) {
    // Path a-b-c inside R2 with I = {x}: vertices 0,1,2 form the path, 3 is joined to all.
    const Graph g(4, {{0, 1}, {1, 2}, {0, 3}, {1, 3}, {2, 3}});
    const std::vector<Vertex> x{3};
    const auto part = partition_t2(g, VertexSubset(4, x));
    const auto comps = order_components(g, part);
    ASSERT_EQ(comps.size(), 1u);
    EXPECT_EQ(comps[0].sequence, ids({0, 1, 2}));
    EXPECT_EQ(g.edge(comps[0].first_forward_edge[0]), (Edge{0, 1}));
    EXPECT_EQ(g.edge(comps[0].first_forward_edge[1]), (Edge{1, 2}));
}

TEST(OrderComponent, Triangle) {
    const auto k3 = complete_graph(3);  // edges 01, 02, 12
    const std::vector<Vertex> zero{0};
    const auto part = partition_t2(k3, VertexSubset(3, zero));
    const auto comps = order_components(k3, part);
    ASSERT_EQ(comps.size(), 1u);
    EXPECT_EQ(comps[0].sequence, ids({1, 2}));
    EXPECT_EQ(k3.edge(comps[0].first_forward_edge[0]), (Edge{1, 2}));
    EXPECT_EQ(k3.edge(comps[0].supporting_edge[0]), (Edge{0, 1}));
}

TEST(OrderComponent, K4) {
    const auto k4 = complete_graph(4);
    const std::vector<Vertex> zero{0};
    const auto part = partition_t2(k4, VertexSubset(4, zero));
    const auto comps = order_components(k4, part);
    ASSERT_EQ(comps.size(), 1u);
    EXPECT_EQ(comps[0].sequence, ids({1, 2, 3}));
    EXPECT_EQ(k4.edge(comps[0].first_forward_edge[0]), (Edge{1, 2}));
}

TEST(OrderComponent, InvariantsOnRandomGraphs) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto g = random_regular_graph(80, 3 + seed % 6, seed);
        const auto part = partition_t2(g, greedy_mis(g));
        std::set<EdgeId> supports;
        for (const auto& comp : order_components(g, part)) {
            std::map<Vertex, std::size_t> pos;
            for (std::size_t j = 0; j < comp.sequence.size(); ++j) pos[comp.sequence[j]] = j;
            EXPECT_EQ(comp.sequence.back(), *std::max_element(comp.sequence.begin(), comp.sequence.end()));
            for (std::size_t j = 0; j + 1 < comp.sequence.size(); ++j) {
                const Vertex v = comp.sequence[j];
                // First forward edge goes to the forward neighbour of least position.
                std::size_t best = SIZE_MAX;
                for (const auto& inc : g.incident(v)) {
                    const auto it = pos.find(inc.neighbor);
                    if (it != pos.end() && it->second > j) best = std::min(best, it->second);
                }
                ASSERT_NE(best, SIZE_MAX);
                EXPECT_EQ(g.edge(comp.first_forward_edge[j]).other(v), comp.sequence[best]);
                const Vertex i = g.edge(comp.supporting_edge[j]).other(v);
                EXPECT_TRUE(part.independent.contains(i));
                EXPECT_TRUE(supports.insert(comp.supporting_edge[j]).second);
            }
        }
    }
}

TEST(InitialWeights, Examples) {
    const auto k3 = complete_graph(3);  // edges 01, 02, 12
    const std::vector<Vertex> zero{0};
    const auto part = partition_t2(k3, VertexSubset(3, zero));
    const auto w = initial_weights_t2(k3, part, order_components(k3, part));
    EXPECT_EQ(w.values(), (std::vector<Weight>{4, 3, 1}));

    const auto c4 = cycle_graph(4);
    const auto p4 = partition_t2(c4, greedy_mis(c4));
    EXPECT_EQ(initial_weights_t2(c4, p4, order_components(c4, p4)).values(), (std::vector<Weight>(4, 3)));
}

TEST(MainPass, TriangleTrace) {
    const auto k3 = complete_graph(3);
    const std::vector<Vertex> zero{0};
    const auto part = partition_t2(k3, VertexSubset(3, zero));
    const auto comps = order_components(k3, part);
    T2Trace trace;
    const auto w = main_pass(k3, part, comps, initial_weights_t2(k3, part, comps), &trace);
    EXPECT_EQ(w.values(), (std::vector<Weight>{4, 3, 1}));
    EXPECT_EQ(testing_support::sums(k3, w.values()), (std::vector<std::int64_t>{7, 5, 4}));
    ASSERT_EQ(trace.decisions.size(), 2u);
    EXPECT_EQ(trace.decisions[0].sum_after, 5);
    EXPECT_EQ(trace.decisions[1].shift, 0);
}

TEST(MainPass, HistoryAndSingleModification) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto g = random_regular_graph(100, 3 + seed % 8, 50 + seed);
        const auto d = static_cast<std::int64_t>(*is_regular(g));
        const auto part = partition_t2(g, greedy_mis(g));
        const auto comps = order_components(g, part);
        const auto w0 = initial_weights_t2(g, part, comps);
        T2Trace trace;
        const auto w1 = main_pass(g, part, comps, w0, &trace);
        const auto final_sums = testing_support::sums(g, w1.values());
        // Sums fixed when a vertex is analysed never move afterwards.
        for (const auto& dec : trace.decisions) EXPECT_EQ(final_sums[dec.vertex], dec.sum_after);
        for (EdgeId id = 0; id < g.edge_count(); ++id) {
            EXPECT_LE(std::abs(w1[id] - w0[id]), 1);
        }
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (part.independent.contains(v)) {
                EXPECT_GE(final_sums[v], 3 * d);
            }
            if (part.r2.contains(v)) {
                EXPECT_LE(final_sums[v], 3 * d - 1);
            }
        }
    }
}

TEST(FinalizeR1, CycleFour) {
    const auto c4 = parse_graph("4 4\n0 1\n1 2\n2 3\n3 0");
    const auto r = solve_theorem2_detailed(c4);
    EXPECT_EQ(testing_support::sums(c4, r.weighting.values()), (std::vector<std::int64_t>{6, 8, 7, 5}));
}

TEST(FinalizeR1, NoR1LeavesWeightsUnchanged) {
    const auto k3 = complete_graph(3);
    const auto r = solve_theorem2_detailed(k3);
    ASSERT_TRUE(r.partition.r1.empty());
    EXPECT_EQ(r.weighting, r.after_main_pass);
}

TEST(SolveTheorem2, Examples) {
    for (const auto& g : {cycle_graph(5), petersen_graph()}) {
        const auto w = solve_theorem2(g);
        EXPECT_TRUE(verify(g, w, weight_set(4)).ok());
    }
    EXPECT_THROW(solve_theorem2(complete_graph(2)), InvalidInput);
    EXPECT_THROW(solve_theorem2(path_graph(4)), InvalidInput);
}

TEST(SolveTheorem2, EndStateConditions) {
    std::vector<Graph> graphs{petersen_graph(), hypercube_graph(3), hypercube_graph(4), complete_bipartite_graph(5),
                              circulant_graph(12, {1, 5}), Graph(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}})};
    for (std::size_t n = 3; n <= 12; ++n) graphs.push_back(complete_graph(n));
    for (std::size_t n = 3; n <= 20; ++n) graphs.push_back(cycle_graph(n));
    for (std::uint64_t seed = 1; seed <= 20; ++seed) graphs.push_back(random_regular_graph(60, 2 + seed % 9, seed));
    for (const auto& g : graphs) {
        SCOPED_TRACE(serialize_graph(g).substr(0, 40));
        expect_end_state(g, solve_theorem2_detailed(g));
    }
}
