#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "regweight/graph.hpp"

namespace regweight {

inline Graph cycle_graph(std::size_t n) {
    if (n < 3) throw GraphError("cycle needs n >= 3");
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v) edges.push_back({v, (v + 1) % n});
    return Graph(n, std::move(edges));
}

inline Graph path_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
    return Graph(n, std::move(edges));
}

inline Graph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
    }
    return Graph(n, std::move(edges));
}

/// K_{d,d}: parts {0..d-1} and {d..2d-1}.
inline Graph complete_bipartite_graph(std::size_t d) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < d; ++u) {
        for (Vertex v = d; v < 2 * d; ++v) edges.push_back({u, v});
    }
    return Graph(2 * d, std::move(edges));
}

/// Vertex v is joined to v+s (mod n) for every offset s; repeated pairs are added once.
inline Graph circulant_graph(std::size_t n, const std::vector<std::size_t>& offsets) {
    std::vector<Edge> edges;
    std::set<std::pair<Vertex, Vertex>> seen;
    for (Vertex v = 0; v < n; ++v) {
        for (std::size_t s : offsets) {
            if (s == 0 || s % n == 0) throw GraphError("circulant offset must not be a multiple of n");
            const Vertex u = (v + s) % n;
            const auto key = std::minmax(u, v);
            if (seen.insert(key).second) edges.push_back({v, u});
        }
    }
    return Graph(n, std::move(edges));
}

inline Graph hypercube_graph(std::size_t k) {
    if (k > 20) throw GraphError("hypercube dimension too large");
    const std::size_t n = std::size_t{1} << k;
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v) {
        for (std::size_t b = 0; b < k; ++b) {
            const Vertex u = v ^ (std::size_t{1} << b);
            if (v < u) edges.push_back({v, u});
        }
    }
    return Graph(n, std::move(edges));
}

inline Graph petersen_graph() {
    std::vector<Edge> edges;
    for (Vertex i = 0; i < 5; ++i) edges.push_back({i, (i + 1) % 5});
    for (Vertex i = 0; i < 5; ++i) edges.push_back({i, i + 5});
    for (Vertex i = 0; i < 5; ++i) edges.push_back({5 + i, 5 + (i + 2) % 5});
    return Graph(10, std::move(edges));
}

/// Raised when a random generator gives up after its attempt budget.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Random d-regular simple graph from the pairing (configuration) model. Points are
/// paired one at a time, drawing uniformly among the unpaired points and redrawing when
/// the pair would form a loop or a repeated edge; a pairing that gets stuck is discarded
/// and restarted. At most 10*n*d pairings are started.
inline Graph random_regular_graph(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (d >= n) throw GraphError("random-regular needs d < n");
    if ((n * d) % 2 != 0) throw GraphError("random-regular needs n*d even");
    std::mt19937_64 rng(seed);
    const std::size_t budget = std::max<std::size_t>(1, 10 * n * d);
    const std::size_t points = n * d;

    for (std::size_t attempt = 0; attempt < budget; ++attempt) {
        std::vector<Vertex> free_points(points);
        for (std::size_t p = 0; p < points; ++p) free_points[p] = p / d;
        std::unordered_set<std::uint64_t> used;
        used.reserve(points);
        std::vector<Edge> edges;
        edges.reserve(points / 2);
        auto key = [](Vertex a, Vertex b) {
            if (a > b) std::swap(a, b);
            return (static_cast<std::uint64_t>(a) << 32) | b;
        };
        auto suitable = [&](Vertex a, Vertex b) { return a != b && !used.contains(key(a, b)); };

        bool stuck = false;
        while (!free_points.empty()) {
            const std::size_t k = free_points.size();
            std::size_t i = 0;
            std::size_t j = 0;
            bool found = false;
            for (std::size_t tries = 0; tries < 4 * k + 16; ++tries) {
                i = std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
                j = std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
                if (i != j && suitable(free_points[i], free_points[j])) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                // Random draws keep failing; scan to see whether any suitable pair is left.
                for (i = 0; i < k && !found; ++i) {
                    for (j = i + 1; j < k; ++j) {
                        if (suitable(free_points[i], free_points[j])) {
                            found = true;
                            break;
                        }
                    }
                }
                if (!found) {
                    stuck = true;
                    break;
                }
                --i;
            }
            const Vertex a = free_points[i];
            const Vertex b = free_points[j];
            used.insert(key(a, b));
            edges.push_back({std::min(a, b), std::max(a, b)});
            if (i < j) std::swap(i, j);
            free_points[i] = free_points.back();
            free_points.pop_back();
            free_points[j] = free_points.back();
            free_points.pop_back();
        }
        if (!stuck) return Graph(n, std::move(edges));
    }
    throw GenerationError("random-regular: pairing budget of " + std::to_string(budget) + " attempts exhausted");
}

/// A generator request such as "random-regular:20:3", "circulant:33:1,2,3" or "petersen".
struct FamilySpec {
    std::string kind;
    std::vector<std::size_t> params;
    std::vector<std::size_t> offsets;
};

inline FamilySpec parse_family_spec(std::string_view text) {
    FamilySpec spec;
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    parts.push_back(current);
    spec.kind = parts[0];
    auto to_size = [&](const std::string& s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
            throw GraphError("bad numeric parameter '" + s + "' in family spec '" + std::string(text) + "'");
        }
        return static_cast<std::size_t>(std::stoull(s));
    };
    for (std::size_t i = 1; i < parts.size(); ++i) {
        if (spec.kind == "circulant" && i == 2) {
            std::stringstream in(parts[i]);
            std::string item;
            while (std::getline(in, item, ',')) spec.offsets.push_back(to_size(item));
        } else {
            spec.params.push_back(to_size(parts[i]));
        }
    }
    return spec;
}

inline bool is_known_family(std::string_view kind) {
    static const std::vector<std::string_view> kinds{"cycle",     "complete", "complete-bipartite", "circulant",
                                                     "hypercube", "petersen", "random-regular",     "path"};
    return std::find(kinds.begin(), kinds.end(), kind) != kinds.end();
}

inline Graph generate(const FamilySpec& spec, std::uint64_t seed) {
    auto need = [&](std::size_t count) {
        if (spec.params.size() != count) {
            throw GraphError("family '" + spec.kind + "' takes " + std::to_string(count) + " parameter(s)");
        }
    };
    if (spec.kind == "cycle") {
        need(1);
        return cycle_graph(spec.params[0]);
    }
    if (spec.kind == "path") {
        need(1);
        return path_graph(spec.params[0]);
    }
    if (spec.kind == "complete") {
        need(1);
        return complete_graph(spec.params[0]);
    }
    if (spec.kind == "complete-bipartite") {
        need(1);
        return complete_bipartite_graph(spec.params[0]);
    }
    if (spec.kind == "circulant") {
        need(1);
        if (spec.offsets.empty()) throw GraphError("circulant needs offsets, e.g. circulant:8:1,2");
        return circulant_graph(spec.params[0], spec.offsets);
    }
    if (spec.kind == "hypercube") {
        need(1);
        return hypercube_graph(spec.params[0]);
    }
    if (spec.kind == "petersen") {
        need(0);
        return petersen_graph();
    }
    if (spec.kind == "random-regular") {
        need(2);
        return random_regular_graph(spec.params[0], spec.params[1], seed);
    }
    throw GraphError("unknown graph family '" + spec.kind + "'");
}

inline Graph generate(std::string_view spec, std::uint64_t seed) { return generate(parse_family_spec(spec), seed); }

}  // namespace regweight
