#pragma once

// Exhaustive search for vertex-colouring edge k-weightings of small graphs.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "regweight/graph.hpp"
#include "regweight/weighting.hpp"

namespace regweight {

enum class SearchStatus { found, infeasible, unknown };

inline const char* to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::found: return "found";
        case SearchStatus::infeasible: return "infeasible";
        case SearchStatus::unknown: return "unknown";
    }
    return "?";
}

struct OracleOutcome {
    SearchStatus status = SearchStatus::unknown;
    std::optional<EdgeWeighting> witness;
    std::uint64_t nodes = 0;
};

struct SearchResult {
    SearchStatus status = SearchStatus::unknown;  // found: min_k is set
    std::optional<std::int64_t> min_k;
    std::optional<EdgeWeighting> witness;
    std::uint64_t nodes = 0;
    std::int64_t kmax = 0;
    std::int64_t proven_infeasible_below = 1;  // every k < this was refuted exhaustively
};

/// True when some component of g is a single edge; no weighting can separate its ends.
inline bool has_isolated_edge(const Graph& g) {
    for (const auto& e : g.edges()) {
        if (g.degree(e.u) == 1 && g.degree(e.v) == 1) return true;
    }
    return false;
}

/// Edges by descending endpoint-degree sum, ties by id.
inline std::vector<EdgeId> oracle_edge_order(const Graph& g) {
    std::vector<EdgeId> order(g.edge_count());
    for (EdgeId id = 0; id < order.size(); ++id) order[id] = id;
    std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
        const auto sa = g.degree(g.edge(a).u) + g.degree(g.edge(a).v);
        const auto sb = g.degree(g.edge(b).u) + g.degree(g.edge(b).v);
        return sa > sb;
    });
    return order;
}

namespace detail {

class WeightingSearch {
public:
    WeightingSearch(const Graph& g, Weight k, std::uint64_t budget)
        : g_(g), k_(k), budget_(budget), order_(oracle_edge_order(g)), value_(g.edge_count(), 0),
          sum_(g.vertex_count(), 0), remaining_(g.vertex_count(), 0), cliques_of_(g.vertex_count()) {
        for (Vertex v = 0; v < g.vertex_count(); ++v) remaining_[v] = g.degree(v);
        collect_cliques();
    }

    SearchStatus run() {
        const auto r = descend(0);
        return r;
    }

    std::uint64_t nodes() const { return nodes_; }
    const std::vector<Weight>& values() const { return value_; }

private:
    bool sealed(Vertex v) const { return remaining_[v] == 0; }

    bool clashes_with_sealed(Vertex v) const {
        for (const auto& inc : g_.incident(v)) {
            if (sealed(inc.neighbor) && sum_[inc.neighbor] == sum_[v]) return true;
        }
        return false;
    }

    /// Every reachable final sum of unsealed v is already held by a sealed neighbour.
    bool range_exhausted(Vertex v) const {
        const Sum lo = sum_[v] + static_cast<Sum>(remaining_[v]);
        const Sum hi = sum_[v] + static_cast<Sum>(remaining_[v]) * k_;
        const Sum width = hi - lo + 1;
        if (width > static_cast<Sum>(g_.degree(v))) return false;
        std::vector<Sum> held;
        for (const auto& inc : g_.incident(v)) {
            const Vertex u = inc.neighbor;
            if (sealed(u) && sum_[u] >= lo && sum_[u] <= hi) held.push_back(sum_[u]);
        }
        std::sort(held.begin(), held.end());
        held.erase(std::unique(held.begin(), held.end()), held.end());
        return static_cast<Sum>(held.size()) == width;
    }

    /// One greedy maximal clique per vertex (neighbours by ascending id), duplicates and
    /// cliques below three vertices dropped.
    void collect_cliques() {
        std::vector<std::vector<Vertex>> seen;
        for (Vertex v = 0; v < g_.vertex_count(); ++v) {
            std::vector<Vertex> clique{v};
            std::vector<Vertex> nbrs;
            for (const auto& inc : g_.incident(v)) nbrs.push_back(inc.neighbor);
            std::sort(nbrs.begin(), nbrs.end());
            for (Vertex u : nbrs) {
                if (std::all_of(clique.begin(), clique.end(), [&](Vertex c) { return g_.adjacent(c, u); })) {
                    clique.push_back(u);
                }
            }
            if (clique.size() < 3) continue;
            std::sort(clique.begin(), clique.end());
            if (std::find(seen.begin(), seen.end(), clique) != seen.end()) continue;
            for (Vertex c : clique) cliques_of_[c].push_back(seen.size());
            seen.push_back(std::move(clique));
        }
        cliques_ = std::move(seen);
    }

    /// Sums inside a clique must be pairwise distinct: the reachable intervals need a system
    /// of distinct representatives (earliest-deadline greedy).
    bool clique_infeasible(std::size_t c) const {
        auto& iv = scratch_;
        iv.clear();
        for (Vertex v : cliques_[c]) {
            const Sum r = static_cast<Sum>(remaining_[v]);
            iv.push_back({sum_[v] + r * k_, sum_[v] + r});
        }
        std::sort(iv.begin(), iv.end());
        used_.clear();
        for (const auto& [hi, lo] : iv) {
            Sum x = lo;
            while (std::find(used_.begin(), used_.end(), x) != used_.end()) ++x;
            if (x > hi) return true;
            used_.push_back(x);
        }
        return false;
    }

    bool cliques_dead(Vertex x) const {
        for (std::size_t c : cliques_of_[x]) {
            if (clique_infeasible(c)) return true;
        }
        return false;
    }

    bool dead(Vertex x) const {
        if (sealed(x)) {
            if (clashes_with_sealed(x)) return true;
            for (const auto& inc : g_.incident(x)) {
                if (!sealed(inc.neighbor) && range_exhausted(inc.neighbor)) return true;
            }
            return false;
        }
        return range_exhausted(x);
    }

    SearchStatus descend(std::size_t depth) {
        if (depth == order_.size()) return SearchStatus::found;
        const EdgeId id = order_[depth];
        const auto& e = g_.edge(id);
        bool unknown = false;
        for (Weight w = 1; w <= k_; ++w) {
            if (nodes_ >= budget_) return SearchStatus::unknown;
            ++nodes_;
            value_[id] = w;
            sum_[e.u] += w;
            sum_[e.v] += w;
            --remaining_[e.u];
            --remaining_[e.v];
            if (!dead(e.u) && !dead(e.v) && !cliques_dead(e.u) && !cliques_dead(e.v)) {
                const auto r = descend(depth + 1);
                if (r == SearchStatus::found) return r;
                if (r == SearchStatus::unknown) unknown = true;
            }
            ++remaining_[e.u];
            ++remaining_[e.v];
            sum_[e.u] -= w;
            sum_[e.v] -= w;
            value_[id] = 0;
            if (unknown) return SearchStatus::unknown;
        }
        return SearchStatus::infeasible;
    }

    const Graph& g_;
    Weight k_;
    std::uint64_t budget_;
    std::vector<EdgeId> order_;
    std::vector<Weight> value_;
    std::vector<Sum> sum_;
    std::vector<std::size_t> remaining_;
    std::vector<std::vector<Vertex>> cliques_;
    std::vector<std::vector<std::size_t>> cliques_of_;
    mutable std::vector<std::pair<Sum, Sum>> scratch_;
    mutable std::vector<Sum> used_;
    std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Decides whether g has a conflict-free weighting from {1..k}. Exhausting `node_budget`
/// yields `unknown`, never a guessed verdict.
inline OracleOutcome exists_weighting(const Graph& g, std::int64_t k,
                                      std::uint64_t node_budget = std::numeric_limits<std::uint64_t>::max()) {
    if (k < 1) throw std::invalid_argument("exists_weighting: k must be at least 1");
    OracleOutcome out;
    if (has_isolated_edge(g)) {
        out.status = SearchStatus::infeasible;
        return out;
    }
    detail::WeightingSearch search(g, k, node_budget);
    out.status = search.run();
    out.nodes = search.nodes();
    if (out.status == SearchStatus::found) {
        out.witness = EdgeWeighting(search.values(), 1, k);
        if (!verify(g, *out.witness, weight_set(k)).ok()) {
            throw std::logic_error("oracle produced a witness that does not verify");
        }
    }
    return out;
}

/// Smallest k <= kmax admitting a conflict-free weighting. The budget is shared by all k.
inline SearchResult min_weights(const Graph& g, std::int64_t kmax,
                                std::uint64_t node_budget = std::numeric_limits<std::uint64_t>::max()) {
    if (kmax < 1) throw std::invalid_argument("min_weights: kmax must be at least 1");
    SearchResult r;
    r.kmax = kmax;
    for (std::int64_t k = 1; k <= kmax; ++k) {
        const std::uint64_t left = node_budget - r.nodes;
        auto o = exists_weighting(g, k, left);
        r.nodes += o.nodes;
        if (o.status == SearchStatus::found) {
            r.status = SearchStatus::found;
            r.min_k = k;
            r.witness = std::move(o.witness);
            return r;
        }
        if (o.status == SearchStatus::unknown) {
            r.status = SearchStatus::unknown;
            return r;
        }
        r.proven_infeasible_below = k + 1;
    }
    r.status = SearchStatus::infeasible;
    return r;
}

}  // namespace regweight
