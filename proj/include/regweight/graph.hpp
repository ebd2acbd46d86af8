#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace regweight {

using Vertex = std::size_t;
using EdgeId = std::size_t;

/// Raised when a graph cannot be built from the given edge list.
class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by the text parsers; carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
public:
    enum class Kind { Header, VertexRange, Duplicate, SelfLoop, EdgeCount, Syntax, Endpoint, Weight };

    ParseError(Kind kind, std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

struct Edge {
    Vertex u;
    Vertex v;

    Vertex other(Vertex x) const noexcept { return x == u ? v : u; }
    bool operator==(const Edge&) const = default;
};

struct Incidence {
    Vertex neighbor;
    EdgeId edge;
};

/// Simple undirected graph on vertices 0..n-1 with edge ids 0..m-1 in insertion order.
/// Immutable once constructed.
class Graph {
public:
    Graph() = default;

    Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)), adjacency_(n) {
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(edges_.size() * 2);
        for (EdgeId id = 0; id < edges_.size(); ++id) {
            const auto [u, v] = edges_[id];
            if (u >= n_ || v >= n_) {
                throw GraphError("edge " + std::to_string(id) + " has an endpoint outside 0.." + std::to_string(n_));
            }
            if (u == v) {
                throw GraphError("edge " + std::to_string(id) + " is a self-loop at " + std::to_string(u));
            }
            if (!seen.insert(pair_key(u, v)).second) {
                throw GraphError("edge " + std::to_string(id) + " duplicates {" + std::to_string(u) + "," +
                                 std::to_string(v) + "}");
            }
            adjacency_[u].push_back({v, id});
            adjacency_[v].push_back({u, id});
        }
    }

    std::size_t vertex_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(EdgeId id) const { return edges_.at(id); }

    std::span<const Incidence> incident(Vertex v) const { return adjacency_.at(v); }
    std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }

    std::optional<EdgeId> find_edge(Vertex u, Vertex v) const {
        const auto& list = adjacency_.at(u);
        for (const auto& inc : list) {
            if (inc.neighbor == v) return inc.edge;
        }
        return std::nullopt;
    }

    bool adjacent(Vertex u, Vertex v) const { return find_edge(u, v).has_value(); }

private:
    static std::uint64_t pair_key(Vertex u, Vertex v) {
        if (u > v) std::swap(u, v);
        return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
    }

    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Incidence>> adjacency_;
};

/// Membership set of vertices of a host graph.
class VertexSubset {
public:
    VertexSubset() = default;
    explicit VertexSubset(std::size_t host_size) : member_(host_size, 0) {}

    VertexSubset(std::size_t host_size, std::span<const Vertex> vertices) : member_(host_size, 0) {
        for (Vertex v : vertices) insert(v);
    }

    static VertexSubset all(std::size_t host_size) {
        VertexSubset s(host_size);
        std::fill(s.member_.begin(), s.member_.end(), 1);
        s.count_ = host_size;
        return s;
    }

    void insert(Vertex v) {
        if (v >= member_.size()) throw GraphError("vertex " + std::to_string(v) + " outside host graph");
        if (!member_[v]) {
            member_[v] = 1;
            ++count_;
        }
    }

    void erase(Vertex v) {
        if (v < member_.size() && member_[v]) {
            member_[v] = 0;
            --count_;
        }
    }

    bool contains(Vertex v) const noexcept { return v < member_.size() && member_[v]; }
    std::size_t size() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }
    std::size_t host_size() const noexcept { return member_.size(); }

    std::vector<Vertex> members() const {
        std::vector<Vertex> out;
        out.reserve(count_);
        for (Vertex v = 0; v < member_.size(); ++v) {
            if (member_[v]) out.push_back(v);
        }
        return out;
    }

    VertexSubset complement() const {
        VertexSubset c(member_.size());
        for (Vertex v = 0; v < member_.size(); ++v) {
            if (!member_[v]) c.insert(v);
        }
        return c;
    }

    bool operator==(const VertexSubset&) const = default;

private:
    std::vector<char> member_;
    std::size_t count_ = 0;
};

/// A graph carved out of a host graph, with maps back to host ids.
struct Subgraph {
    Graph graph;
    std::vector<Vertex> host_vertex;
    std::vector<EdgeId> host_edge;
};

inline std::optional<std::size_t> is_regular(const Graph& g) {
    if (g.vertex_count() == 0) return std::nullopt;
    const std::size_t d = g.degree(0);
    for (Vertex v = 1; v < g.vertex_count(); ++v) {
        if (g.degree(v) != d) return std::nullopt;
    }
    return d;
}

/// Number of neighbours of v inside s.
inline std::size_t degree_into(const Graph& g, Vertex v, const VertexSubset& s) {
    std::size_t k = 0;
    for (const auto& inc : g.incident(v)) {
        if (s.contains(inc.neighbor)) ++k;
    }
    return k;
}

/// Subgraph spanned by an edge subset; keeps every host vertex so vertex ids coincide.
inline Subgraph edge_subgraph(const Graph& g, std::span<const EdgeId> edge_ids) {
    Subgraph sub;
    sub.host_vertex.resize(g.vertex_count());
    std::iota(sub.host_vertex.begin(), sub.host_vertex.end(), Vertex{0});
    std::vector<Edge> edges;
    edges.reserve(edge_ids.size());
    for (EdgeId id : edge_ids) {
        edges.push_back(g.edge(id));
        sub.host_edge.push_back(id);
    }
    sub.graph = Graph(g.vertex_count(), std::move(edges));
    return sub;
}

/// G[s] with vertices relabelled 0..|s|-1 in ascending host order.
inline Subgraph induced_subgraph(const Graph& g, const VertexSubset& s) {
    Subgraph sub;
    std::vector<Vertex> local(g.vertex_count(), static_cast<Vertex>(-1));
    for (Vertex v : s.members()) {
        local[v] = sub.host_vertex.size();
        sub.host_vertex.push_back(v);
    }
    std::vector<Edge> edges;
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        const auto& e = g.edge(id);
        if (s.contains(e.u) && s.contains(e.v)) {
            edges.push_back({local[e.u], local[e.v]});
            sub.host_edge.push_back(id);
        }
    }
    sub.graph = Graph(sub.host_vertex.size(), std::move(edges));
    return sub;
}

/// Connected components of G[s]. Components are listed by smallest host vertex; each
/// component's vertices are relabelled in ascending host order.
inline std::vector<Subgraph> induced_components(const Graph& g, const VertexSubset& s) {
    std::vector<Subgraph> out;
    std::vector<char> visited(g.vertex_count(), 0);
    std::vector<Vertex> stack;
    for (Vertex start = 0; start < g.vertex_count(); ++start) {
        if (!s.contains(start) || visited[start]) continue;
        VertexSubset comp(g.vertex_count());
        stack.assign(1, start);
        visited[start] = 1;
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            comp.insert(v);
            for (const auto& inc : g.incident(v)) {
                if (s.contains(inc.neighbor) && !visited[inc.neighbor]) {
                    visited[inc.neighbor] = 1;
                    stack.push_back(inc.neighbor);
                }
            }
        }
        out.push_back(induced_subgraph(g, comp));
    }
    return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

/// Splits into lines, dropping blanks and '#' comments; keeps 1-based line numbers.
inline std::vector<std::pair<std::size_t, std::string_view>> data_lines(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        const auto line = trim(raw);
        if (!line.empty() && line.front() != '#') out.emplace_back(line_no, line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return out;
}

/// Parses exactly `count` non-negative integers from a line, or returns nullopt.
inline std::optional<std::vector<long long>> read_ints(std::string_view line, std::size_t count) {
    std::istringstream in{std::string(line)};
    std::vector<long long> values;
    long long x = 0;
    while (in >> x) values.push_back(x);
    if (!in.eof() || values.size() != count) return std::nullopt;
    return values;
}

}  // namespace detail

/// Parses the edge-list format: optional '#' comments, header "n m", then m lines "u v".
inline Graph parse_graph(std::string_view text) {
    const auto lines = detail::data_lines(text);
    if (lines.empty()) throw ParseError(ParseError::Kind::Header, 1, "missing header \"n m\"");
    const auto header = detail::read_ints(lines[0].second, 2);
    if (!header || (*header)[0] < 0 || (*header)[1] < 0) {
        throw ParseError(ParseError::Kind::Header, lines[0].first, "malformed header, expected \"n m\"");
    }
    const auto n = static_cast<std::size_t>((*header)[0]);
    const auto m = static_cast<std::size_t>((*header)[1]);
    if (lines.size() - 1 != m) {
        const std::size_t at = lines.size() - 1 > m ? lines[m + 1].first : lines.back().first;
        throw ParseError(ParseError::Kind::EdgeCount, at,
                         "header declares " + std::to_string(m) + " edges, found " + std::to_string(lines.size() - 1));
    }
    std::vector<Edge> edges;
    edges.reserve(m);
    std::unordered_set<std::uint64_t> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [line_no, line] = lines[i];
        const auto uv = detail::read_ints(line, 2);
        if (!uv) throw ParseError(ParseError::Kind::Syntax, line_no, "expected \"u v\"");
        const long long u = (*uv)[0];
        const long long v = (*uv)[1];
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n) {
            throw ParseError(ParseError::Kind::VertexRange, line_no, "vertex id out of range 0.." + std::to_string(n));
        }
        if (u == v) throw ParseError(ParseError::Kind::SelfLoop, line_no, "self-loop at vertex " + std::to_string(u));
        const auto lo = static_cast<std::uint64_t>(std::min(u, v));
        const auto hi = static_cast<std::uint64_t>(std::max(u, v));
        if (!seen.insert((lo << 32) | hi).second) {
            throw ParseError(ParseError::Kind::Duplicate, line_no,
                             "duplicate edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
        }
        edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    }
    return Graph(n, std::move(edges));
}

inline std::string serialize_graph(const Graph& g) {
    std::ostringstream out;
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
    return out.str();
}

}  // namespace regweight
