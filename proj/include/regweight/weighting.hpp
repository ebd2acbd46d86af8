#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "regweight/graph.hpp"

namespace regweight {

using Weight = std::int64_t;
using Sum = std::int64_t;

/// Integer weight per edge id of a host graph, with the inclusive range its producer declared.
class EdgeWeighting {
public:
    EdgeWeighting() = default;

    EdgeWeighting(std::size_t edge_count, Weight initial, Weight min_weight, Weight max_weight)
        : weights_(edge_count, initial), min_(min_weight), max_(max_weight) {
        check(initial);
    }

    EdgeWeighting(std::vector<Weight> weights, Weight min_weight, Weight max_weight)
        : weights_(std::move(weights)), min_(min_weight), max_(max_weight) {
        for (Weight w : weights_) check(w);
    }

    std::size_t size() const noexcept { return weights_.size(); }
    Weight operator[](EdgeId e) const { return weights_.at(e); }
    const std::vector<Weight>& values() const noexcept { return weights_; }
    Weight min_weight() const noexcept { return min_; }
    Weight max_weight() const noexcept { return max_; }

    void set(EdgeId e, Weight w) {
        check(w);
        weights_.at(e) = w;
    }

    bool operator==(const EdgeWeighting&) const = default;

private:
    void check(Weight w) const {
        if (w < min_ || w > max_) {
            throw std::out_of_range("weight " + std::to_string(w) + " outside declared range [" +
                                    std::to_string(min_) + "," + std::to_string(max_) + "]");
        }
    }

    std::vector<Weight> weights_;
    Weight min_ = 1;
    Weight max_ = 1;
};

/// Report of a weighting check. Conflict-free iff both lists are empty.
struct VerificationReport {
    std::vector<Sum> sums;
    std::vector<EdgeId> conflicts;
    std::vector<EdgeId> weight_violations;

    bool ok() const noexcept { return conflicts.empty() && weight_violations.empty(); }
};

inline void require_matching(const Graph& g, const EdgeWeighting& w) {
    if (w.size() != g.edge_count()) {
        throw std::invalid_argument("weighting has " + std::to_string(w.size()) + " entries but graph has " +
                                    std::to_string(g.edge_count()) + " edges");
    }
}

inline std::vector<Sum> weighted_degrees(const Graph& g, const EdgeWeighting& w) {
    require_matching(g, w);
    std::vector<Sum> sums(g.vertex_count(), 0);
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        const auto& e = g.edge(id);
        sums[e.u] += w[id];
        sums[e.v] += w[id];
    }
    return sums;
}

inline VerificationReport verify(const Graph& g, const EdgeWeighting& w, const std::set<Weight>& allowed) {
    VerificationReport report;
    report.sums = weighted_degrees(g, w);
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        const auto& e = g.edge(id);
        if (report.sums[e.u] == report.sums[e.v]) report.conflicts.push_back(id);
        if (!allowed.contains(w[id])) report.weight_violations.push_back(id);
    }
    return report;
}

/// {1, ..., k}
inline std::set<Weight> weight_set(Weight k) {
    std::set<Weight> s;
    for (Weight x = 1; x <= k; ++x) s.insert(x);
    return s;
}

/// One "u v w" line per edge, in edge-id order.
inline std::string serialize_weighting(const Graph& g, const EdgeWeighting& w) {
    require_matching(g, w);
    std::ostringstream out;
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        out << g.edge(id).u << ' ' << g.edge(id).v << ' ' << w[id] << '\n';
    }
    return out.str();
}

/// Parses a weighting file against its host graph; endpoints must match edge ids line by line.
inline EdgeWeighting parse_weighting(const Graph& g, std::string_view text) {
    const auto lines = detail::data_lines(text);
    if (lines.size() != g.edge_count()) {
        const std::size_t at = lines.empty() ? 1 : lines.back().first;
        throw ParseError(ParseError::Kind::EdgeCount, at,
                         "expected " + std::to_string(g.edge_count()) + " weight lines, found " +
                             std::to_string(lines.size()));
    }
    std::vector<Weight> weights;
    weights.reserve(lines.size());
    for (EdgeId id = 0; id < lines.size(); ++id) {
        const auto [line_no, line] = lines[id];
        std::istringstream in{std::string(line)};
        long long u = 0;
        long long v = 0;
        long long w = 0;
        if (!(in >> u >> v >> w) || !(in >> std::ws).eof()) {
            throw ParseError(ParseError::Kind::Syntax, line_no, "expected \"u v w\"");
        }
        const auto& e = g.edge(id);
        const bool same = (static_cast<long long>(e.u) == u && static_cast<long long>(e.v) == v) ||
                          (static_cast<long long>(e.u) == v && static_cast<long long>(e.v) == u);
        if (!same) {
            throw ParseError(ParseError::Kind::Endpoint, line_no,
                             "endpoints do not match graph edge " + std::to_string(id) + " {" + std::to_string(e.u) +
                                 "," + std::to_string(e.v) + "}");
        }
        if (w < 1) throw ParseError(ParseError::Kind::Weight, line_no, "weights must be positive");
        weights.push_back(w);
    }
    const Weight hi = weights.empty() ? 1 : *std::max_element(weights.begin(), weights.end());
    return EdgeWeighting(std::move(weights), 1, hi);
}

}  // namespace regweight
