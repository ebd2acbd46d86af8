#pragma once

// Test-side recomputations, written without the library's own helpers so that they can
// serve as independent oracles.

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "regweight/graph.hpp"

namespace testing_support {

using regweight::EdgeId;
using regweight::Graph;
using regweight::Vertex;

inline std::vector<std::int64_t> sums(const Graph& g, const std::vector<std::int64_t>& w) {
    std::vector<std::int64_t> s(g.vertex_count(), 0);
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        s[g.edge(id).u] += w[id];
        s[g.edge(id).v] += w[id];
    }
    return s;
}

inline std::size_t conflicts(const Graph& g, const std::vector<std::int64_t>& w) {
    const auto s = sums(g, w);
    std::size_t c = 0;
    for (const auto& e : g.edges()) c += s[e.u] == s[e.v];
    return c;
}

/// Enumerates all k^m weightings; true iff one is conflict-free.
inline bool brute_force_exists(const Graph& g, std::int64_t k) {
    const std::size_t m = g.edge_count();
    std::vector<std::int64_t> w(m, 1);
    while (true) {
        if (conflicts(g, w) == 0) return true;
        std::size_t i = 0;
        while (i < m && w[i] == k) w[i++] = 1;
        if (i == m) return false;
        ++w[i];
    }
}

/// Degree of v counted over an explicit edge list.
inline std::vector<std::int64_t> degrees_over(const Graph& g, const std::vector<EdgeId>& ids) {
    std::vector<std::int64_t> d(g.vertex_count(), 0);
    for (EdgeId id : ids) {
        ++d[g.edge(id).u];
        ++d[g.edge(id).v];
    }
    return d;
}

/// Number of neighbours of v satisfying pred, by scanning the full edge list.
template <class Pred>
std::vector<std::int64_t> neighbour_counts(const Graph& g, Pred pred) {
    std::vector<std::int64_t> c(g.vertex_count(), 0);
    for (const auto& e : g.edges()) {
        if (pred(e.u, e.v)) ++c[e.u];
        if (pred(e.v, e.u)) ++c[e.v];
    }
    return c;
}

/// Exact test of |observed - num/den * base| <= tol_num/tol_den * d without floating point.
inline bool within(std::int64_t observed, std::int64_t num, std::int64_t den, std::int64_t base, std::int64_t tol_num,
                   std::int64_t tol_den, std::int64_t d) {
    __int128 diff = static_cast<__int128>(observed) * den - static_cast<__int128>(num) * base;
    if (diff < 0) diff = -diff;
    return diff * tol_den <= static_cast<__int128>(tol_num) * d * den;
}

}  // namespace testing_support
