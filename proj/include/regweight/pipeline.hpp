#pragma once

// Las Vegas 3-weighting pipeline for d-regular graphs.
//
// A random vertex set V0 and several random edge classes are drawn by whole-sample
// rejection until their per-vertex degree conditions hold. V1 = V \ V0 then receives
// class-dependent target sums reached by raising E1 edges, and V0 is settled by a
// slot-reservation pass over personal edge sets taken from an Eulerian orientation of
// G[V0]. Every returned weighting has passed the final verifier; failures are reported
// by stage, never papered over.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "regweight/decompose.hpp"
#include "regweight/graph.hpp"
#include "regweight/pipeline_config.hpp"
#include "regweight/rational.hpp"
#include "regweight/solver_t2.hpp"
#include "regweight/weighting.hpp"

namespace regweight {

/// A pipeline stage could not produce an admissible result (retry budget exhausted,
/// infeasible deficit, failed precondition).
class StageFailure : public std::runtime_error {
public:
    StageFailure(std::string stage, std::int64_t attempts, const std::string& detail)
        : std::runtime_error(stage + ": " + detail), stage_(std::move(stage)), attempts_(attempts) {}

    const std::string& stage() const noexcept { return stage_; }
    std::int64_t attempts() const noexcept { return attempts_; }

private:
    std::string stage_;
    std::int64_t attempts_;
};

struct StageReport {
    std::string stage;
    bool accepted = false;
    std::int64_t attempts = 0;
    std::string detail;
};

struct PipelineState {
    std::size_t degree = 0;
    VertexSubset v0;
    VertexSubset v1;
    std::vector<std::int64_t> c1;  // class 1..q on V1, 0 on V0
    std::vector<EdgeId> gprime1;
    std::vector<EdgeId> eprime;
    std::vector<EdgeId> edoubleprime;
    std::vector<EdgeId> e1;
    std::vector<EdgeId> estar;
    std::vector<EdgeId> e0;
    std::vector<std::int64_t> c0;            // label on V0, -1 on V1
    std::vector<std::int64_t> class_colour;  // proper colouring inside each V1 class, -1 on V0
    std::int64_t delta2 = 0;
    std::int64_t colours_used = 0;
    std::vector<Sum> targets;  // target sum on V1, 0 on V0
    std::vector<std::vector<EdgeId>> personal;
    std::vector<std::optional<Sum>> slots;  // even base 2i of S_v = {2i, 2i+1} on V0
    std::optional<EdgeWeighting> omega0;
    std::optional<EdgeWeighting> omega1;
    std::optional<EdgeWeighting> omega2;
    std::vector<StageReport> stages;
};

/// Stream `stream` of the master seed (splitmix64 of seed + (stream + 1) * golden gamma).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace detail {

inline std::string deviation_text(Vertex v, const char* what, std::int64_t observed, const Rational& expected,
                                  const Rational& tolerance) {
    std::ostringstream out;
    out << "vertex " << v << ": " << what << " = " << observed << ", expected " << decimal_string(expected, 8)
        << " +- " << decimal_string(tolerance, 8);
    return out.str();
}

/// Deviation |observed - expected| in units of the tolerance; > 1 means violated.
inline double excess(std::int64_t observed, const Rational& expected, const Rational& tolerance) {
    return std::abs(static_cast<double>(observed) - to_double(expected)) / to_double(tolerance);
}

inline std::vector<char> edge_mask(std::size_t m, const std::vector<EdgeId>& ids) {
    std::vector<char> mask(m, 0);
    for (EdgeId id : ids) mask[id] = 1;
    return mask;
}

}  // namespace detail

inline std::size_t require_regular_degree(const Graph& g) {
    const auto d = is_regular(g);
    if (!d) throw InvalidInput("graph is not regular");
    return *d;
}

// --- V0 ---------------------------------------------------------------------------------

struct V0Sample {
    VertexSubset v0;
    VertexSubset v1;
    std::int64_t attempts = 0;
};

/// Per-vertex check |d_V0(v) - p0 d| <= tol_v0 d; returns the first violating vertex.
inline std::optional<Vertex> v0_violation(const Graph& g, const VertexSubset& v0, const PipelineConfig& cfg,
                                          std::int64_t d) {
    const auto p = SmallFraction::from(cfg.p0);
    const auto tol = SmallFraction::from(cfg.tol_v0);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        const auto k = static_cast<std::int64_t>(degree_into(g, v, v0));
        if (!within(k, p, d, tol, d)) return v;
    }
    return std::nullopt;
}

template <class Rng>
V0Sample sample_v0(const Graph& g, const PipelineConfig& cfg, Rng& rng) {
    const auto d = static_cast<std::int64_t>(require_regular_degree(g));
    std::bernoulli_distribution coin(to_double(cfg.p0));
    std::string worst;
    for (std::int64_t attempt = 1; attempt <= cfg.retry_budget; ++attempt) {
        VertexSubset v0(g.vertex_count());
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (coin(rng)) v0.insert(v);
        }
        const auto bad = v0_violation(g, v0, cfg, d);
        if (!bad) return {v0, v0.complement(), attempt};
        if (attempt == cfg.retry_budget) {
            double worst_excess = 0;
            for (Vertex v = 0; v < g.vertex_count(); ++v) {
                const auto k = static_cast<std::int64_t>(degree_into(g, v, v0));
                const double x = detail::excess(k, cfg.p0 * d, cfg.tol_v0 * d);
                if (x > worst_excess) {
                    worst_excess = x;
                    worst = detail::deviation_text(v, "d_V0", k, cfg.p0 * d, cfg.tol_v0 * d);
                }
            }
        }
    }
    throw StageFailure("sample_v0", cfg.retry_budget,
                       "retry budget of " + std::to_string(cfg.retry_budget) + " exhausted; worst " + worst);
}

// --- c1 and E', E'' ---------------------------------------------------------------------

/// E' = {uv in G'1 : c1(u) + c1(v) >= q + 2}; E'' is the rest of G'1.
inline std::pair<std::vector<EdgeId>, std::vector<EdgeId>> split_eprime(const Graph& g,
                                                                         const std::vector<EdgeId>& gprime1,
                                                                         const std::vector<std::int64_t>& c1,
                                                                         std::int64_t q) {
    std::pair<std::vector<EdgeId>, std::vector<EdgeId>> out;
    for (EdgeId id : gprime1) {
        const auto& e = g.edge(id);
        (c1[e.u] + c1[e.v] >= q + 2 ? out.first : out.second).push_back(id);
    }
    return out;
}

struct C1Sample {
    std::vector<std::int64_t> c1;
    std::vector<EdgeId> eprime;
    std::vector<EdgeId> edoubleprime;
    std::int64_t attempts = 0;
};

/// Checks both class conditions for every V1 vertex; returns a description of the first
/// violation.
inline std::optional<std::string> c1_violation(const Graph& g, const VertexSubset& v1,
                                               const std::vector<EdgeId>& gprime1, const std::vector<std::int64_t>& c1,
                                               const std::vector<EdgeId>& eprime, const PipelineConfig& cfg,
                                               std::int64_t d) {
    const std::size_t n = g.vertex_count();
    std::vector<std::int64_t> d_class(n, 0), d_v1(n, 0), d_g1(n, 0), d_ep(n, 0);
    for (const auto& e : g.edges()) {
        if (v1.contains(e.u) && v1.contains(e.v)) {
            ++d_v1[e.u];
            ++d_v1[e.v];
            if (c1[e.u] == c1[e.v]) {
                ++d_class[e.u];
                ++d_class[e.v];
            }
        }
    }
    for (EdgeId id : gprime1) {
        ++d_g1[g.edge(id).u];
        ++d_g1[g.edge(id).v];
    }
    for (EdgeId id : eprime) {
        ++d_ep[g.edge(id).u];
        ++d_ep[g.edge(id).v];
    }
    const SmallFraction inv_q{1, cfg.q};
    const auto tol_class = SmallFraction::from(cfg.tol_class);
    const auto tol_ep = SmallFraction::from(cfg.tol_eprime);
    for (Vertex v : v1.members()) {
        const std::int64_t i = c1[v];
        if (!within(d_class[v], inv_q, d_v1[v], tol_class, d)) {
            return detail::deviation_text(v, "d_V1i", d_class[v], Rational(d_v1[v], cfg.q), cfg.tol_class * d);
        }
        if (!within(d_ep[v], SmallFraction{i - 1, cfg.q}, d_g1[v], tol_ep, d)) {
            return detail::deviation_text(v, "d_E'", d_ep[v], Rational((i - 1) * d_g1[v], cfg.q),
                                          cfg.tol_eprime * d);
        }
    }
    return std::nullopt;
}

template <class Rng>
C1Sample sample_c1(const Graph& g, const VertexSubset& v1, const std::vector<EdgeId>& gprime1,
                   const PipelineConfig& cfg, Rng& rng) {
    const auto d = static_cast<std::int64_t>(require_regular_degree(g));
    // d_G'1(v) must already sit within 9/16 d_V1(v) +- 3.
    {
        std::vector<std::int64_t> d_g1(g.vertex_count(), 0);
        for (EdgeId id : gprime1) {
            ++d_g1[g.edge(id).u];
            ++d_g1[g.edge(id).v];
        }
        for (Vertex v : v1.members()) {
            const auto dv1 = static_cast<std::int64_t>(degree_into(g, v, v1));
            if (!within(d_g1[v], SmallFraction{9, 16}, dv1, SmallFraction{PipelineConfig::subgraph_slack(), 1}, 1)) {
                throw InvariantViolation("G'1 degree of vertex " + std::to_string(v) + " outside 9/16 d +- 3");
            }
        }
    }
    std::uniform_int_distribution<std::int64_t> label(1, cfg.q);
    std::string last;
    for (std::int64_t attempt = 1; attempt <= cfg.retry_budget; ++attempt) {
        C1Sample s;
        s.c1.assign(g.vertex_count(), 0);
        for (Vertex v : v1.members()) s.c1[v] = label(rng);
        std::tie(s.eprime, s.edoubleprime) = split_eprime(g, gprime1, s.c1, cfg.q);
        const auto bad = c1_violation(g, v1, gprime1, s.c1, s.eprime, cfg, d);
        if (!bad) {
            s.attempts = attempt;
            return s;
        }
        last = *bad;
    }
    throw StageFailure("sample_c1", cfg.retry_budget,
                       "retry budget of " + std::to_string(cfg.retry_budget) + " exhausted; last " + last);
}

// --- E1 ---------------------------------------------------------------------------------

struct E1Sample {
    std::vector<EdgeId> e1;
    std::vector<EdgeId> estar;
    std::int64_t attempts = 0;
};

inline std::vector<EdgeId> cross_edges(const Graph& g, const VertexSubset& v0) {
    std::vector<EdgeId> out;
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        if (v0.contains(g.edge(id).u) != v0.contains(g.edge(id).v)) out.push_back(id);
    }
    return out;
}

inline std::optional<std::string> e1_violation(const Graph& g, const VertexSubset& v0, const std::vector<EdgeId>& e1,
                                               const PipelineConfig& cfg, std::int64_t d) {
    std::vector<std::int64_t> d_e1(g.vertex_count(), 0);
    for (EdgeId id : e1) {
        ++d_e1[g.edge(id).u];
        ++d_e1[g.edge(id).v];
    }
    const auto p = SmallFraction::from(cfg.p_e1);
    const auto tol1 = SmallFraction::from(cfg.tol_e1_v1);
    const auto tol0 = SmallFraction::from(cfg.tol_e1_v0);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        const bool in_v0 = v0.contains(v);
        const auto other = static_cast<std::int64_t>(in_v0 ? g.degree(v) - degree_into(g, v, v0) : degree_into(g, v, v0));
        if (!within(d_e1[v], p, other, in_v0 ? tol0 : tol1, d)) {
            return detail::deviation_text(v, in_v0 ? "d_E1 (V0 side)" : "d_E1 (V1 side)", d_e1[v], cfg.p_e1 * other,
                                          (in_v0 ? cfg.tol_e1_v0 : cfg.tol_e1_v1) * d);
        }
    }
    return std::nullopt;
}

template <class Rng>
E1Sample sample_e1(const Graph& g, const VertexSubset& v0, const PipelineConfig& cfg, Rng& rng) {
    const auto d = static_cast<std::int64_t>(require_regular_degree(g));
    const auto cross = cross_edges(g, v0);
    std::bernoulli_distribution coin(to_double(cfg.p_e1));
    std::string last;
    for (std::int64_t attempt = 1; attempt <= cfg.retry_budget; ++attempt) {
        E1Sample s;
        for (EdgeId id : cross) (coin(rng) ? s.e1 : s.estar).push_back(id);
        const auto bad = e1_violation(g, v0, s.e1, cfg, d);
        if (!bad) {
            s.attempts = attempt;
            return s;
        }
        last = *bad;
    }
    throw StageFailure("sample_e1", cfg.retry_budget,
                       "retry budget of " + std::to_string(cfg.retry_budget) + " exhausted; last " + last);
}

// --- E0 and c0 --------------------------------------------------------------------------

struct E0Sample {
    std::vector<EdgeId> e0;
    std::vector<std::int64_t> c0;
    std::int64_t attempts = 0;
};

/// One unconditioned draw: uniform labels on V0, then every E* edge uv (v in V0) enters
/// E0 with probability c0(v) / c0_classes.
template <class Rng>
E0Sample draw_e0_c0(const Graph& g, const VertexSubset& v0, const std::vector<EdgeId>& estar,
                    const PipelineConfig& cfg, Rng& rng) {
    E0Sample s;
    s.c0.assign(g.vertex_count(), -1);
    std::uniform_int_distribution<std::int64_t> label(0, cfg.c0_classes - 1);
    for (Vertex v : v0.members()) s.c0[v] = label(rng);
    std::uniform_int_distribution<std::int64_t> die(0, cfg.c0_classes - 1);
    for (EdgeId id : estar) {
        const auto& e = g.edge(id);
        const Vertex owner = v0.contains(e.u) ? e.u : e.v;
        if (die(rng) < s.c0[owner]) s.e0.push_back(id);
    }
    return s;
}

inline std::optional<std::string> e0_violation(const Graph& g, const VertexSubset& v0, const std::vector<EdgeId>& estar,
                                               const std::vector<EdgeId>& e0, const std::vector<std::int64_t>& c0,
                                               const PipelineConfig& cfg, std::int64_t d) {
    const std::size_t n = g.vertex_count();
    std::vector<std::int64_t> d_star(n, 0), d_e0(n, 0), d_same(n, 0), d_v0(n, 0);
    for (EdgeId id : estar) {
        ++d_star[g.edge(id).u];
        ++d_star[g.edge(id).v];
    }
    for (EdgeId id : e0) {
        ++d_e0[g.edge(id).u];
        ++d_e0[g.edge(id).v];
    }
    for (const auto& e : g.edges()) {
        if (v0.contains(e.u) && v0.contains(e.v)) {
            ++d_v0[e.u];
            ++d_v0[e.v];
            if (c0[e.u] == c0[e.v]) {
                ++d_same[e.u];
                ++d_same[e.v];
            }
        }
    }
    const std::int64_t k = cfg.c0_classes;
    const auto tol_e0 = SmallFraction::from(cfg.tol_e0);
    const auto tol_cls = SmallFraction::from(cfg.tol_c0class);
    const auto tol_v1 = SmallFraction::from(cfg.tol_e0_v1);
    const auto marginal = SmallFraction::from(cfg.e0_marginal());
    for (Vertex v = 0; v < n; ++v) {
        if (v0.contains(v)) {
            if (c0[v] == 0 && d_e0[v] != 0) return "vertex " + std::to_string(v) + ": label 0 but E0 edges present";
            if (!within(d_e0[v], SmallFraction{c0[v], k}, d_star[v], tol_e0, d)) {
                return detail::deviation_text(v, "d_E0 (V0 side)", d_e0[v], Rational(c0[v] * d_star[v], k),
                                              cfg.tol_e0 * d);
            }
            if (!within(d_same[v], SmallFraction{1, k}, d_v0[v], tol_cls, d)) {
                return detail::deviation_text(v, "d_V0,c0", d_same[v], Rational(d_v0[v], k), cfg.tol_c0class * d);
            }
        } else if (!within(d_e0[v], marginal, d_star[v], tol_v1, d)) {
            return detail::deviation_text(v, "d_E0 (V1 side)", d_e0[v], cfg.e0_marginal() * d_star[v],
                                          cfg.tol_e0_v1 * d);
        }
    }
    return std::nullopt;
}

template <class Rng>
E0Sample sample_e0_c0(const Graph& g, const VertexSubset& v0, const std::vector<EdgeId>& estar,
                      const PipelineConfig& cfg, Rng& rng) {
    const auto d = static_cast<std::int64_t>(require_regular_degree(g));
    std::string last;
    for (std::int64_t attempt = 1; attempt <= cfg.retry_budget; ++attempt) {
        auto s = draw_e0_c0(g, v0, estar, cfg, rng);
        const auto bad = e0_violation(g, v0, estar, s.e0, s.c0, cfg, d);
        if (!bad) {
            s.attempts = attempt;
            return s;
        }
        last = *bad;
    }
    throw StageFailure("sample_e0_c0", cfg.retry_budget,
                       "retry budget of " + std::to_string(cfg.retry_budget) + " exhausted; last " + last);
}

// --- weights on V1 ----------------------------------------------------------------------

/// 1 on E(V1) \ E'; 2 on E1, E0 and E(V0); 3 on E' and the remaining V0-V1 edges.
inline EdgeWeighting initial_weighting_w0(const Graph& g, const PipelineState& st) {
    const std::size_t m = g.edge_count();
    const auto in_ep = detail::edge_mask(m, st.eprime);
    const auto in_e1 = detail::edge_mask(m, st.e1);
    const auto in_e0 = detail::edge_mask(m, st.e0);
    EdgeWeighting w(m, 2, 1, 3);
    for (EdgeId id = 0; id < m; ++id) {
        const auto& e = g.edge(id);
        const bool both_v1 = st.v1.contains(e.u) && st.v1.contains(e.v);
        const bool both_v0 = st.v0.contains(e.u) && st.v0.contains(e.v);
        const bool cross = !both_v1 && !both_v0;
        const bool one = both_v1 && !in_ep[id];
        const bool two = in_e1[id] || in_e0[id] || both_v0;
        const bool three = in_ep[id] || (cross && !in_e0[id] && !in_e1[id]);
        if (one + two + three != 1) {
            throw InvariantViolation("edge " + std::to_string(id) + " matches " + std::to_string(one + two + three) +
                                     " weight clauses");
        }
        w.set(id, one ? 1 : two ? 2 : 3);
    }
    return w;
}

struct TargetSums {
    std::vector<std::int64_t> class_colour;
    std::int64_t delta2 = 0;
    std::int64_t colours_used = 0;
    std::vector<Sum> targets;
};

/// Greedy colouring of each G[V1,i] (ascending id, smallest free colour) and targets
/// floor(U_i(d)) + colour. Fails when the colours used in one class reach the base of
/// the next; the colours never exceed Delta2 + 1.
inline TargetSums target_sums(const Graph& g, const PipelineState& st, const PipelineConfig& cfg) {
    const auto d = static_cast<std::int64_t>(st.degree);
    TargetSums out;
    out.class_colour.assign(g.vertex_count(), -1);
    out.targets.assign(g.vertex_count(), 0);
    for (Vertex v : st.v1.members()) {
        std::int64_t same = 0;
        std::vector<char> taken;
        for (const auto& inc : g.incident(v)) {
            const Vertex u = inc.neighbor;
            if (!st.v1.contains(u) || st.c1[u] != st.c1[v]) continue;
            ++same;
            const auto c = out.class_colour[u];
            if (c >= 0) {
                if (static_cast<std::size_t>(c) >= taken.size()) taken.resize(static_cast<std::size_t>(c) + 1, 0);
                taken[static_cast<std::size_t>(c)] = 1;
            }
        }
        out.delta2 = std::max(out.delta2, same);
        std::int64_t colour = 0;
        while (static_cast<std::size_t>(colour) < taken.size() && taken[static_cast<std::size_t>(colour)]) ++colour;
        out.class_colour[v] = colour;
    }
    for (Vertex v : st.v1.members()) out.colours_used = std::max(out.colours_used, out.class_colour[v] + 1);
    std::vector<BigInt> base(static_cast<std::size_t>(cfg.q) + 2);
    for (std::int64_t i = 1; i <= cfg.q; ++i) base[static_cast<std::size_t>(i)] = cfg.class_target_base(i, d);
    for (std::int64_t i = 1; i < cfg.q; ++i) {
        if (base[static_cast<std::size_t>(i)] + out.colours_used > base[static_cast<std::size_t>(i) + 1]) {
            std::ostringstream msg;
            msg << out.colours_used << " colours (Delta2 = " << out.delta2 << ") bridge classes " << i << " and "
                << i + 1 << " (bases "
                << base[static_cast<std::size_t>(i)] << ", " << base[static_cast<std::size_t>(i) + 1] << ")";
            throw StageFailure("target_sums", 1, msg.str());
        }
    }
    for (Vertex v : st.v1.members()) {
        out.targets[v] = base[static_cast<std::size_t>(st.c1[v])].convert_to<Sum>() + out.class_colour[v];
    }
    return out;
}

/// Raises, for every V1 vertex, exactly target - sigma of its E1 edges from 2 to 3
/// (smallest edge id first).
inline EdgeWeighting adjust_e1(const Graph& g, const PipelineState& st, const PipelineConfig& cfg, EdgeWeighting w) {
    const auto d = static_cast<std::int64_t>(st.degree);
    const auto sums = weighted_degrees(g, w);
    std::vector<std::vector<EdgeId>> e1_at(g.vertex_count());
    for (EdgeId id : st.e1) {
        const auto& e = g.edge(id);
        e1_at[st.v1.contains(e.u) ? e.u : e.v].push_back(id);
    }
    for (Vertex v : st.v1.members()) {
        auto& mine = e1_at[v];
        std::sort(mine.begin(), mine.end());
        const Sum deficit = st.targets[v] - sums[v];
        if (deficit < 0 || deficit > static_cast<Sum>(mine.size())) {
            const auto i = st.c1[v];
            std::ostringstream msg;
            msg << "vertex " << v << " (class " << i << "): sum " << sums[v] << ", target " << st.targets[v]
                << ", d_E1 " << mine.size() << "; class interval [" << decimal_string(cfg.class_lower(i, d), 10)
                << ", " << decimal_string(cfg.class_upper(i, d), 10) << "]";
            throw StageFailure("adjust_e1", 1, msg.str());
        }
        for (Sum k = 0; k < deficit; ++k) {
            if (w[mine[static_cast<std::size_t>(k)]] != 2) throw InvariantViolation("E1 edge not at weight 2");
            w.set(mine[static_cast<std::size_t>(k)], 3);
        }
    }
    return w;
}

// --- weights on V0 ----------------------------------------------------------------------

/// Personal edge sets of G[V0], as host edge ids per host vertex.
inline std::vector<std::vector<EdgeId>> personal_edge_sets_v0(const Graph& g, const VertexSubset& v0) {
    const auto sub = induced_subgraph(g, v0);
    const auto local = personal_edge_sets(sub.graph);
    std::vector<std::vector<EdgeId>> out(g.vertex_count());
    for (Vertex x = 0; x < local.size(); ++x) {
        for (EdgeId id : local[x]) out[sub.host_vertex[x]].push_back(sub.host_edge[id]);
        std::sort(out[sub.host_vertex[x]].begin(), out[sub.host_vertex[x]].end());
    }
    return out;
}

struct V0PassResult {
    EdgeWeighting weighting;
    std::vector<std::optional<Sum>> slots;
};

/// Walks V0 in ascending id. The current vertex v may move each personal edge by one:
/// towards 3 if the other end is not yet settled, otherwise in the single direction that
/// keeps the other end inside its slot. Among the reachable sums (fewest moves first,
/// then smaller) it takes the first one outside the slots of settled same-label
/// neighbours, using at most 2 d_{V0,c0(v)}(v) moves, and reserves the slot around it.
inline V0PassResult v0_pass(const Graph& g, const PipelineState& st, EdgeWeighting w) {
    const std::size_t n = g.vertex_count();
    std::vector<std::int64_t> d_v0(n, 0), d_same(n, 0);
    for (const auto& e : g.edges()) {
        if (st.v0.contains(e.u) && st.v0.contains(e.v)) {
            ++d_v0[e.u];
            ++d_v0[e.v];
            if (st.c0[e.u] == st.c0[e.v]) {
                ++d_same[e.u];
                ++d_same[e.v];
            }
        }
    }
    for (Vertex v : st.v0.members()) {
        if (d_same[v] > 0 && !(d_v0[v] > 4 * d_same[v])) {
            throw StageFailure("v0_pass", 1,
                               "vertex " + std::to_string(v) + ": 0.5 d_V0 = " + decimal_string(Rational(d_v0[v], 2)) +
                                   " does not exceed 2 d_V0,c0 = " + std::to_string(2 * d_same[v]));
        }
    }

    auto sums = weighted_degrees(g, w);
    std::vector<std::optional<Sum>> slots(n);
    auto apply = [&](EdgeId id, Weight value) {
        const auto& e = g.edge(id);
        const Weight delta = value - w[id];
        sums[e.u] += delta;
        sums[e.v] += delta;
        w.set(id, value);
    };

    for (Vertex v : st.v0.members()) {
        std::vector<EdgeId> up;
        std::vector<EdgeId> down;
        for (EdgeId id : st.personal[v]) {
            if (w[id] != 2) throw InvariantViolation("personal edge " + std::to_string(id) + " already modified");
            const Vertex u = g.edge(id).other(v);
            if (!slots[u] || sums[u] == *slots[u]) {
                up.push_back(id);
            } else {
                down.push_back(id);
            }
        }
        std::vector<Sum> forbidden;
        for (const auto& inc : g.incident(v)) {
            const Vertex u = inc.neighbor;
            if (slots[u] && st.v0.contains(u) && st.c0[u] == st.c0[v]) {
                forbidden.push_back(*slots[u]);
                forbidden.push_back(*slots[u] + 1);
            }
        }
        const Sum base = sums[v];
        const int max_up = static_cast<int>(up.size());
        const int max_down = static_cast<int>(down.size());
        const int max_moves = static_cast<int>(2 * d_same[v]);
        std::optional<int> chosen;
        for (int mag = 0; mag <= max_moves && !chosen; ++mag) {
            for (int shift : {-mag, mag}) {
                if (shift < -max_down || shift > max_up) continue;
                if (std::find(forbidden.begin(), forbidden.end(), base + shift) == forbidden.end()) {
                    chosen = shift;
                    break;
                }
            }
        }
        if (!chosen) throw InvariantViolation("no admissible sum for V0 vertex " + std::to_string(v));
        const auto& pool = *chosen > 0 ? up : down;
        for (int k = 0; k < std::abs(*chosen); ++k) {
            const EdgeId id = pool[static_cast<std::size_t>(k)];
            apply(id, *chosen > 0 ? 3 : 1);
        }
        const Sum s = sums[v];
        slots[v] = s - (((s % 2) + 2) % 2);
    }
    return {std::move(w), std::move(slots)};
}

// --- orchestration ----------------------------------------------------------------------

/// Edge conflicts of the final weighting, grouped by where the endpoints live.
struct ConflictBreakdown {
    std::size_t v1_v1 = 0;
    std::size_t v0_same_label = 0;
    std::size_t v0_cross_label = 0;
    std::size_t v0_v1 = 0;
    std::optional<EdgeId> first;

    std::size_t total() const { return v1_v1 + v0_same_label + v0_cross_label + v0_v1; }
};

struct Theorem3Result {
    bool success = false;
    std::string failed_stage;
    std::string message;
    PipelineState state;
    std::optional<EdgeWeighting> weighting;
    ConflictBreakdown conflicts;
};

inline ConflictBreakdown classify_conflicts(const Graph& g, const PipelineState& st, const VerificationReport& report) {
    ConflictBreakdown out;
    for (EdgeId id : report.conflicts) {
        const auto& e = g.edge(id);
        const bool a = st.v0.contains(e.u);
        const bool b = st.v0.contains(e.v);
        if (!a && !b) {
            ++out.v1_v1;
        } else if (a && b) {
            (st.c0[e.u] == st.c0[e.v] ? out.v0_same_label : out.v0_cross_label)++;
        } else {
            ++out.v0_v1;
        }
        if (!out.first) out.first = id;
    }
    return out;
}

/// Runs every stage in order. Input errors (irregular graph, preset needing a larger
/// degree) throw; stage failures and final conflicts come back in the result.
inline Theorem3Result solve_theorem3(const Graph& g, const PipelineConfig& cfg, std::uint64_t seed) {
    const auto d = require_regular_degree(g);
    cfg.validate_for_degree(static_cast<std::int64_t>(d));

    Theorem3Result r;
    PipelineState& st = r.state;
    st.degree = d;
    std::string stage = "sample_v0";
    auto record = [&](std::string name, std::int64_t attempts, std::string detail = {}) {
        st.stages.push_back({std::move(name), true, attempts, std::move(detail)});
    };
    try {
        {
            std::mt19937_64 rng(derive_seed(seed, 0));
            auto s = sample_v0(g, cfg, rng);
            st.v0 = std::move(s.v0);
            st.v1 = std::move(s.v1);
            record(stage, s.attempts);
        }
        stage = "nine_sixteenths_subgraph";
        {
            std::vector<EdgeId> v1_edges;
            for (EdgeId id = 0; id < g.edge_count(); ++id) {
                if (st.v1.contains(g.edge(id).u) && st.v1.contains(g.edge(id).v)) v1_edges.push_back(id);
            }
            st.gprime1 = nine_sixteenths_subgraph(g, v1_edges);
            record(stage, 1);
        }
        stage = "sample_c1";
        {
            std::mt19937_64 rng(derive_seed(seed, 1));
            auto s = sample_c1(g, st.v1, st.gprime1, cfg, rng);
            st.c1 = std::move(s.c1);
            st.eprime = std::move(s.eprime);
            st.edoubleprime = std::move(s.edoubleprime);
            record(stage, s.attempts);
        }
        stage = "sample_e1";
        {
            std::mt19937_64 rng(derive_seed(seed, 2));
            auto s = sample_e1(g, st.v0, cfg, rng);
            st.e1 = std::move(s.e1);
            st.estar = std::move(s.estar);
            record(stage, s.attempts);
        }
        stage = "sample_e0_c0";
        {
            std::mt19937_64 rng(derive_seed(seed, 3));
            auto s = sample_e0_c0(g, st.v0, st.estar, cfg, rng);
            st.e0 = std::move(s.e0);
            st.c0 = std::move(s.c0);
            record(stage, s.attempts);
        }
        stage = "initial_weighting_w0";
        st.omega0 = initial_weighting_w0(g, st);
        record(stage, 1);
        stage = "target_sums";
        {
            auto t = target_sums(g, st, cfg);
            st.class_colour = std::move(t.class_colour);
            st.delta2 = t.delta2;
            st.colours_used = t.colours_used;
            st.targets = std::move(t.targets);
            record(stage, 1, "Delta2 = " + std::to_string(st.delta2) + ", colours " + std::to_string(st.colours_used));
        }
        stage = "adjust_e1";
        st.omega1 = adjust_e1(g, st, cfg, *st.omega0);
        record(stage, 1);
        stage = "personal_edge_sets";
        st.personal = personal_edge_sets_v0(g, st.v0);
        record(stage, 1);
        stage = "v0_pass";
        {
            auto p = v0_pass(g, st, *st.omega1);
            st.omega2 = std::move(p.weighting);
            st.slots = std::move(p.slots);
            record(stage, 1);
        }
    } catch (const StageFailure& f) {
        st.stages.push_back({f.stage(), false, f.attempts(), f.what()});
        r.failed_stage = f.stage();
        r.message = f.what();
        return r;
    }

    const auto report = verify(g, *st.omega2, weight_set(3));
    r.conflicts = classify_conflicts(g, st, report);
    if (report.ok()) {
        r.success = true;
        r.weighting = st.omega2;
        st.stages.push_back({"verify", true, 1, "conflict-free"});
    } else {
        std::ostringstream msg;
        msg << report.conflicts.size() << " conflicts (V0-V1 " << r.conflicts.v0_v1 << ", V0 cross-label "
            << r.conflicts.v0_cross_label << ", V0 same-label " << r.conflicts.v0_same_label << ", V1-V1 "
            << r.conflicts.v1_v1 << ")";
        if (r.conflicts.first) {
            const auto& e = g.edge(*r.conflicts.first);
            msg << "; first at edge " << *r.conflicts.first << " {" << e.u << "," << e.v << "} sum "
                << report.sums[e.u];
        }
        r.failed_stage = "verify";
        r.message = msg.str();
        st.stages.push_back({"verify", false, 1, r.message});
    }
    return r;
}

}  // namespace regweight
