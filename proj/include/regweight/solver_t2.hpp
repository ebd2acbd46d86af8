#pragma once

// Deterministic vertex-colouring edge 4-weighting of d-regular graphs (d >= 2).
//
// Vertices are split into a maximal independent set I, the vertices R1 that are
// isolated in G[V \ I], and the rest R2. Vertices of R2 are fixed one at a time along a
// BFS-derived order of each component of G[R2]; a vertex's sum is adjusted only through
// its backward edges, each paired with the supporting edge (into I) of the backward
// neighbour so that the neighbour's sum stays put. Sums end up below 3d on R2, at least
// 3d on I and in {3d-1, 4d} on R1, so only R2-R2 edges could conflict and those are
// separated while walking the order.

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "regweight/graph.hpp"
#include "regweight/weighting.hpp"

namespace regweight {

/// Input rejected by a solver (not regular, degree too small, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An internal invariant of a construction failed. Indicates a bug, never bad input.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct T2Partition {
    VertexSubset independent;  // I
    VertexSubset r1;           // isolated vertices of G[V \ I]
    VertexSubset r2;
};

/// One component of G[R2] in processing order. Vectors are indexed by position in
/// `sequence`; the last vertex has no forward or supporting edge, so the two edge vectors
/// hold sequence.size() - 1 entries.
struct OrderedComponent {
    std::vector<Vertex> sequence;
    std::vector<EdgeId> first_forward_edge;
    std::vector<EdgeId> supporting_edge;

    Vertex last() const { return sequence.back(); }
};

/// Per-vertex record of the main pass.
struct T2Decision {
    Vertex vertex = 0;
    std::size_t component = 0;
    std::size_t position = 0;
    std::vector<EdgeId> backward_edges;
    std::vector<Sum> forbidden;  // sums already fixed at backward neighbours
    Sum sum_before = 0;
    int shift = 0;
    std::vector<EdgeId> moved_edges;
    Sum sum_after = 0;
};

struct T2Trace {
    std::vector<T2Decision> decisions;
};

struct T2Result {
    std::size_t degree = 0;
    T2Partition partition;
    std::vector<OrderedComponent> components;
    EdgeWeighting initial;
    EdgeWeighting after_main_pass;
    EdgeWeighting weighting;
    T2Trace trace;
};

/// Scans vertices in ascending id and keeps v unless an earlier kept vertex is adjacent.
inline VertexSubset greedy_mis(const Graph& g) {
    VertexSubset mis(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        bool blocked = false;
        for (const auto& inc : g.incident(v)) {
            if (mis.contains(inc.neighbor)) {
                blocked = true;
                break;
            }
        }
        if (!blocked) mis.insert(v);
    }
    return mis;
}

inline T2Partition partition_t2(const Graph& g, const VertexSubset& mis) {
    if (mis.host_size() != g.vertex_count()) throw InvalidInput("independent set does not belong to this graph");
    for (const auto& e : g.edges()) {
        if (mis.contains(e.u) && mis.contains(e.v)) {
            throw InvalidInput("set is not independent: edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "}");
        }
    }
    T2Partition part{mis, VertexSubset(g.vertex_count()), VertexSubset(g.vertex_count())};
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (mis.contains(v)) continue;
        bool into_i = false;
        bool into_r = false;
        for (const auto& inc : g.incident(v)) {
            (mis.contains(inc.neighbor) ? into_i : into_r) = true;
        }
        if (!into_i) throw InvalidInput("independent set is not maximal: vertex " + std::to_string(v) + " can be added");
        (into_r ? part.r2 : part.r1).insert(v);
    }
    return part;
}

/// Orders one component of G[R2] (given as an induced subgraph with host maps).
/// The root is the largest host id; BFS from it visits neighbours in descending host id
/// and hands out positions n-1, n-2, ... in discovery order.
inline OrderedComponent order_component(const Subgraph& comp, const Graph& g, const VertexSubset& mis) {
    const Graph& h = comp.graph;
    const std::size_t n = h.vertex_count();
    if (n < 2) throw InvalidInput("a component of G[R2] must contain an edge");

    Vertex root = 0;
    for (Vertex x = 1; x < n; ++x) {
        if (comp.host_vertex[x] > comp.host_vertex[root]) root = x;
    }

    std::vector<std::size_t> position(n, std::numeric_limits<std::size_t>::max());
    std::size_t next = n;
    std::deque<Vertex> queue{root};
    position[root] = --next;
    while (!queue.empty()) {
        const Vertex x = queue.front();
        queue.pop_front();
        std::vector<Vertex> nbrs;
        for (const auto& inc : h.incident(x)) nbrs.push_back(inc.neighbor);
        std::sort(nbrs.begin(), nbrs.end(),
                  [&](Vertex a, Vertex b) { return comp.host_vertex[a] > comp.host_vertex[b]; });
        for (Vertex y : nbrs) {
            if (position[y] == std::numeric_limits<std::size_t>::max()) {
                position[y] = --next;
                queue.push_back(y);
            }
        }
    }
    if (next != 0) throw InvalidInput("component of G[R2] is not connected");

    OrderedComponent out;
    out.sequence.resize(n);
    std::vector<Vertex> local_at(n);
    for (Vertex x = 0; x < n; ++x) {
        out.sequence[position[x]] = comp.host_vertex[x];
        local_at[position[x]] = x;
    }

    for (std::size_t j = 0; j + 1 < n; ++j) {
        const Vertex host = out.sequence[j];
        const Vertex local = local_at[j];
        std::size_t best = std::numeric_limits<std::size_t>::max();
        EdgeId best_edge = 0;
        for (const auto& inc : h.incident(local)) {
            const std::size_t k = position[inc.neighbor];
            if (k > j && k < best) {
                best = k;
                best_edge = comp.host_edge[inc.edge];
            }
        }
        if (best == std::numeric_limits<std::size_t>::max()) {
            throw InvariantViolation("vertex " + std::to_string(host) + " has no forward neighbour");
        }
        out.first_forward_edge.push_back(best_edge);

        std::optional<Incidence> support;
        for (const auto& inc : g.incident(host)) {
            if (mis.contains(inc.neighbor) && (!support || inc.neighbor < support->neighbor)) support = inc;
        }
        if (!support) {
            throw InvariantViolation("vertex " + std::to_string(host) +
                                     " of R2 has no neighbour in the independent set");
        }
        out.supporting_edge.push_back(support->edge);
    }
    return out;
}

inline std::vector<OrderedComponent> order_components(const Graph& g, const T2Partition& part) {
    std::vector<OrderedComponent> out;
    for (const auto& comp : induced_components(g, part.r2)) out.push_back(order_component(comp, g, part.independent));
    return out;
}

/// First forward edges 1, other R2 edges 2, supporting edges 4, remaining edges at I 3.
inline EdgeWeighting initial_weights_t2(const Graph& g, const T2Partition& part,
                                        const std::vector<OrderedComponent>& components) {
    EdgeWeighting w(g.edge_count(), 3, 1, 4);
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        const auto& e = g.edge(id);
        if (part.r2.contains(e.u) && part.r2.contains(e.v)) {
            w.set(id, 2);
        } else if (!part.independent.contains(e.u) && !part.independent.contains(e.v)) {
            throw InvariantViolation("edge " + std::to_string(id) + " joins R1 to R");
        }
    }
    for (const auto& comp : components) {
        for (EdgeId id : comp.first_forward_edge) w.set(id, 1);
        for (EdgeId id : comp.supporting_edge) w.set(id, 4);
    }
    return w;
}

inline EdgeWeighting main_pass(const Graph& g, const T2Partition& /*part*/, const std::vector<OrderedComponent>& components,
                               EdgeWeighting w, T2Trace* trace = nullptr) {
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> comp_of(g.vertex_count(), none);
    std::vector<std::size_t> pos_of(g.vertex_count(), none);
    std::vector<EdgeId> first_forward(g.vertex_count(), none);
    std::vector<EdgeId> supporting(g.vertex_count(), none);
    for (std::size_t c = 0; c < components.size(); ++c) {
        const auto& comp = components[c];
        for (std::size_t j = 0; j < comp.sequence.size(); ++j) {
            const Vertex v = comp.sequence[j];
            comp_of[v] = c;
            pos_of[v] = j;
            if (j + 1 < comp.sequence.size()) {
                first_forward[v] = comp.first_forward_edge[j];
                supporting[v] = comp.supporting_edge[j];
            }
        }
    }
    std::vector<Sum> sums = weighted_degrees(g, w);

    auto apply = [&](EdgeId id, Weight value) {
        const auto& e = g.edge(id);
        const Weight delta = value - w[id];
        sums[e.u] += delta;
        sums[e.v] += delta;
        w.set(id, value);
    };

    for (std::size_t c = 0; c < components.size(); ++c) {
        const auto& comp = components[c];
        for (std::size_t j = 0; j < comp.sequence.size(); ++j) {
            const Vertex v = comp.sequence[j];
            std::vector<EdgeId> raise;
            std::vector<EdgeId> lower;
            std::vector<Sum> forbidden;
            std::vector<EdgeId> backward;
            for (const auto& inc : g.incident(v)) {
                const Vertex u = inc.neighbor;
                if (comp_of[u] != c || pos_of[u] >= j) continue;
                backward.push_back(inc.edge);
                forbidden.push_back(sums[u]);
                const EdgeId s = supporting[u];
                if (inc.edge == first_forward[u]) {
                    if (w[inc.edge] != 1 || w[s] != 4) {
                        throw InvariantViolation("first forward edge " + std::to_string(inc.edge) + " already modified");
                    }
                    raise.push_back(inc.edge);
                } else {
                    if (w[inc.edge] != 2) {
                        throw InvariantViolation("backward edge " + std::to_string(inc.edge) + " already modified");
                    }
                    (w[s] == 3 ? lower : raise).push_back(inc.edge);
                }
            }
            std::sort(raise.begin(), raise.end());
            std::sort(lower.begin(), lower.end());
            std::sort(backward.begin(), backward.end());

            const Sum base = sums[v];
            const int max_up = static_cast<int>(raise.size());
            const int max_down = static_cast<int>(lower.size());
            std::optional<int> chosen;
            for (int mag = 0; mag <= std::max(max_up, max_down) && !chosen; ++mag) {
                for (int shift : {-mag, mag}) {
                    if (shift < -max_down || shift > max_up) continue;
                    if (std::find(forbidden.begin(), forbidden.end(), base + shift) == forbidden.end()) {
                        chosen = shift;
                        break;
                    }
                }
            }
            if (!chosen) {
                throw InvariantViolation("no admissible sum for vertex " + std::to_string(v));
            }

            std::vector<EdgeId> moved;
            const auto& pool = *chosen > 0 ? raise : lower;
            for (int k = 0; k < std::abs(*chosen); ++k) {
                const EdgeId e = pool[static_cast<std::size_t>(k)];
                const Vertex u = g.edge(e).other(v);
                const EdgeId s = supporting[u];
                if (e == first_forward[u]) {
                    apply(e, 2);
                    apply(s, 3);
                } else if (w[s] == 3) {
                    apply(e, 1);
                    apply(s, 4);
                } else {
                    apply(e, 3);
                    apply(s, 3);
                }
                moved.push_back(e);
            }
            if (trace) {
                trace->decisions.push_back(
                    {v, c, j, std::move(backward), std::move(forbidden), base, *chosen, std::move(moved), sums[v]});
            }
        }
    }
    return w;
}

/// Sets each R1 vertex to 3d-1 (one edge to a neighbour at >= 3d+1 lowered to 2) or to
/// 4d (all its edges raised to 4). Vertices in ascending id; smallest-id neighbour wins.
inline EdgeWeighting finalize_r1(const Graph& g, const T2Partition& part, EdgeWeighting w, std::size_t d) {
    std::vector<Sum> sums = weighted_degrees(g, w);
    const Sum threshold = 3 * static_cast<Sum>(d) + 1;
    auto apply = [&](EdgeId id, Weight value) {
        const auto& e = g.edge(id);
        const Weight delta = value - w[id];
        sums[e.u] += delta;
        sums[e.v] += delta;
        w.set(id, value);
    };
    for (Vertex v : part.r1.members()) {
        std::optional<Incidence> pick;
        for (const auto& inc : g.incident(v)) {
            if (w[inc.edge] != 3) {
                throw InvariantViolation("edge " + std::to_string(inc.edge) + " at R1 vertex " + std::to_string(v) +
                                         " is not weighted 3");
            }
            if (sums[inc.neighbor] >= threshold && (!pick || inc.neighbor < pick->neighbor)) pick = inc;
        }
        if (pick) {
            apply(pick->edge, 2);
        } else {
            for (const auto& inc : g.incident(v)) apply(inc.edge, 4);
        }
    }
    return w;
}

inline T2Result solve_theorem2_detailed(const Graph& g) {
    const auto d = is_regular(g);
    if (!d) throw InvalidInput("graph is not regular");
    if (*d < 2) throw InvalidInput("degree " + std::to_string(*d) + " < 2 (isolated edges cannot be distinguished)");

    T2Result r;
    r.degree = *d;
    r.partition = partition_t2(g, greedy_mis(g));
    r.components = order_components(g, r.partition);
    r.initial = initial_weights_t2(g, r.partition, r.components);
    r.after_main_pass = main_pass(g, r.partition, r.components, r.initial, &r.trace);
    r.weighting = finalize_r1(g, r.partition, r.after_main_pass, *d);

    const auto report = verify(g, r.weighting, weight_set(4));
    if (!report.ok()) {
        throw InvariantViolation("4-weighting has " + std::to_string(report.conflicts.size()) + " conflicts");
    }
    return r;
}

inline EdgeWeighting solve_theorem2(const Graph& g) { return solve_theorem2_detailed(g).weighting; }

}  // namespace regweight
