#pragma once

// Edge decompositions built from Eulerian circuits. Odd-degree vertices of each component
// are joined to an auxiliary vertex, the circuit is walked with the smallest unused edge
// id taken first, and auxiliary edges are dropped afterwards.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "regweight/graph.hpp"

namespace regweight {

/// One traversed edge of an Eulerian circuit, oriented in walking direction.
struct OrientedEdge {
    EdgeId edge;
    Vertex from;
    Vertex to;
    bool auxiliary;
};

namespace detail {

/// Eulerian circuits of the (auxiliary-augmented) components spanned by `edge_ids`.
/// Each inner vector is one closed walk; auxiliary edges are flagged and their `from`/`to`
/// use the placeholder vertex id g.vertex_count().
inline std::vector<std::vector<OrientedEdge>> euler_circuits(const Graph& g, std::span<const EdgeId> edge_ids) {
    const std::size_t n = g.vertex_count();
    const Vertex aux = n;
    const EdgeId aux_base = g.edge_count();
    constexpr auto none = std::numeric_limits<std::size_t>::max();

    std::vector<std::vector<std::pair<EdgeId, Vertex>>> adj(n + 1);
    for (EdgeId id : edge_ids) {
        const auto& e = g.edge(id);
        adj[e.u].push_back({id, e.v});
        adj[e.v].push_back({id, e.u});
    }

    // Components over vertices that carry at least one edge, in ascending smallest vertex.
    std::vector<std::size_t> comp(n, none);
    std::vector<std::vector<Vertex>> members;
    for (Vertex s = 0; s < n; ++s) {
        if (adj[s].empty() || comp[s] != none) continue;
        members.emplace_back();
        std::vector<Vertex> stack{s};
        comp[s] = members.size() - 1;
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            members.back().push_back(v);
            for (const auto& [id, w] : adj[v]) {
                if (comp[w] == none) {
                    comp[w] = members.size() - 1;
                    stack.push_back(w);
                }
            }
        }
        std::sort(members.back().begin(), members.back().end());
    }

    std::vector<std::vector<OrientedEdge>> circuits;
    std::vector<char> used;
    std::vector<std::size_t> cursor(n + 1, 0);
    for (const auto& verts : members) {
        adj[aux].clear();
        cursor[aux] = 0;
        std::size_t aux_count = 0;
        for (Vertex v : verts) {
            if (adj[v].size() % 2 == 1) {
                const EdgeId id = aux_base + aux_count++;
                adj[v].push_back({id, aux});
                adj[aux].push_back({id, v});
            }
        }
        for (Vertex v : verts) std::sort(adj[v].begin(), adj[v].end());
        used.assign(aux_base + aux_count, 0);

        const Vertex start = aux_count > 0 ? aux : verts.front();
        std::vector<std::pair<Vertex, std::size_t>> stack{{start, none}};
        std::vector<OrientedEdge> reversed;
        while (!stack.empty()) {
            const Vertex v = stack.back().first;
            auto& cur = cursor[v];
            while (cur < adj[v].size() && used[adj[v][cur].first]) ++cur;
            if (cur < adj[v].size()) {
                const auto [id, w] = adj[v][cur];
                used[id] = 1;
                stack.push_back({w, id});
            } else {
                const auto [to, via] = stack.back();
                stack.pop_back();
                if (via != none) {
                    const Vertex from = stack.back().first;
                    reversed.push_back({via, from, to, via >= aux_base});
                }
            }
        }
        std::reverse(reversed.begin(), reversed.end());
        circuits.push_back(std::move(reversed));
    }
    return circuits;
}

}  // namespace detail

/// Assignment of every edge of a host graph to side 0 or side 1.
struct EdgeBipartition {
    std::vector<std::uint8_t> side;

    std::vector<EdgeId> edges_on(std::uint8_t s) const {
        std::vector<EdgeId> out;
        for (EdgeId id = 0; id < side.size(); ++id) {
            if (side[id] == s) out.push_back(id);
        }
        return out;
    }
};

/// Splits the listed edges of g in two by alternating along Eulerian circuits; each
/// vertex then has d/2 - 1 <= d_i(v) <= d/2 + 1 on both sides, d taken within the list.
inline std::pair<std::vector<EdgeId>, std::vector<EdgeId>> split_edges(const Graph& g,
                                                                        std::span<const EdgeId> edge_ids) {
    std::pair<std::vector<EdgeId>, std::vector<EdgeId>> out;
    for (const auto& circuit : detail::euler_circuits(g, edge_ids)) {
        bool first = true;
        for (const auto& step : circuit) {
            if (step.auxiliary) continue;
            (first ? out.first : out.second).push_back(step.edge);
            first = !first;
        }
    }
    std::sort(out.first.begin(), out.first.end());
    std::sort(out.second.begin(), out.second.end());
    return out;
}

inline std::vector<EdgeId> all_edges(const Graph& g) {
    std::vector<EdgeId> ids(g.edge_count());
    for (EdgeId id = 0; id < ids.size(); ++id) ids[id] = id;
    return ids;
}

inline EdgeBipartition split_half(const Graph& g) {
    const auto [a, b] = split_edges(g, all_edges(g));
    EdgeBipartition part{std::vector<std::uint8_t>(g.edge_count(), 0)};
    for (EdgeId id : b) part.side[id] = 1;
    return part;
}

/// Edge subset with d'(v) within 9/16 d(v) +- 3 at every vertex, obtained from four
/// successive halvings: keep the first half of g and the second half of the fourth
/// split of the remainder.
inline std::vector<EdgeId> nine_sixteenths_subgraph(const Graph& g, std::span<const EdgeId> edge_ids) {
    auto [g2_first, g2_second] = split_edges(g, edge_ids);
    auto [g3_first, g3_second] = split_edges(g, g2_second);
    auto [g4_first, g4_second] = split_edges(g, g3_second);
    auto [g5_first, g5_second] = split_edges(g, g4_second);
    std::vector<EdgeId> out = std::move(g2_first);
    out.insert(out.end(), g5_second.begin(), g5_second.end());
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<EdgeId> nine_sixteenths_subgraph(const Graph& g) {
    return nine_sixteenths_subgraph(g, all_edges(g));
}

/// Personal edge sets: orient each component of g along an Eulerian circuit (started at
/// the auxiliary vertex when one is needed) and give every vertex its outgoing real edges.
/// The sets are pairwise disjoint and |E_v| >= deg(v)/2 - 1.
inline std::vector<std::vector<EdgeId>> personal_edge_sets(const Graph& g) {
    std::vector<std::vector<EdgeId>> sets(g.vertex_count());
    for (const auto& circuit : detail::euler_circuits(g, all_edges(g))) {
        for (const auto& step : circuit) {
            if (!step.auxiliary) sets[step.from].push_back(step.edge);
        }
    }
    for (auto& s : sets) std::sort(s.begin(), s.end());
    return sets;
}

}  // namespace regweight
