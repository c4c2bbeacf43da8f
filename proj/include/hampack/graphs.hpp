#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hampack/errors.hpp"
#include "hampack/rng.hpp"

namespace hampack {

/// Bipartite graph on two sides A, B of equal size n, vertices 1..n each.
struct BipartiteGraph {
    int n = 0;
    std::vector<std::pair<std::int32_t, std::int32_t>> edges; // (a, b), 1-based

    std::vector<std::vector<std::int32_t>> adjacency_left() const {
        std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(n) + 1);
        for (auto [a, b] : edges) adj[static_cast<std::size_t>(a)].push_back(b);
        return adj;
    }

    /// Minimum degree over both sides.
    int min_degree() const {
        std::vector<int> da(static_cast<std::size_t>(n) + 1, 0), db(static_cast<std::size_t>(n) + 1, 0);
        for (auto [a, b] : edges) {
            ++da[static_cast<std::size_t>(a)];
            ++db[static_cast<std::size_t>(b)];
        }
        int d = static_cast<int>(edges.size());
        for (int v = 1; v <= n; ++v) d = std::min({d, da[static_cast<std::size_t>(v)], db[static_cast<std::size_t>(v)]});
        return n == 0 ? 0 : d;
    }
};

/// Simple undirected graph on vertices 1..n.
struct SimpleGraph {
    int n = 0;
    std::vector<std::pair<std::int32_t, std::int32_t>> edges; // u < v, 1-based

    std::vector<std::vector<std::int32_t>> adjacency() const {
        std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(n) + 1);
        for (auto [u, v] : edges) {
            adj[static_cast<std::size_t>(u)].push_back(v);
            adj[static_cast<std::size_t>(v)].push_back(u);
        }
        return adj;
    }

    int min_degree() const {
        if (n == 0) return 0;
        std::vector<int> d(static_cast<std::size_t>(n) + 1, 0);
        for (auto [u, v] : edges) {
            ++d[static_cast<std::size_t>(u)];
            ++d[static_cast<std::size_t>(v)];
        }
        return *std::min_element(d.begin() + 1, d.end());
    }
};

inline BipartiteGraph random_bipartite(int n, double p, std::uint64_t seed) {
    if (n < 0 || p < 0.0 || p > 1.0) throw InvalidInput("random_bipartite: bad parameters");
    BipartiteGraph g{n, {}};
    Rng rng(derive_seed(seed, streams::kGraphGen));
    for (std::int32_t a = 1; a <= n; ++a)
        for (std::int32_t b = 1; b <= n; ++b)
            if (rng.next_unit() < p) g.edges.push_back({a, b});
    return g;
}

inline SimpleGraph random_simple(int n, double p, std::uint64_t seed) {
    if (n < 0 || p < 0.0 || p > 1.0) throw InvalidInput("random_simple: bad parameters");
    SimpleGraph g{n, {}};
    Rng rng(derive_seed(seed, streams::kGraphGen, 1));
    for (std::int32_t u = 1; u <= n; ++u)
        for (std::int32_t v = u + 1; v <= n; ++v)
            if (rng.next_unit() < p) g.edges.push_back({u, v});
    return g;
}

inline SimpleGraph complete_graph(int n) {
    SimpleGraph g{n, {}};
    for (std::int32_t u = 1; u <= n; ++u)
        for (std::int32_t v = u + 1; v <= n; ++v) g.edges.push_back({u, v});
    return g;
}

// Bipartite test-graph format: "N" header, then "a b" edge lines (1-based).
inline BipartiteGraph parse_bipartite(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    int n = -1;
    BipartiteGraph g;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ss(line);
        if (n < 0) {
            if (!(ss >> n) || n < 1) throw InvalidInput("line " + std::to_string(line_no) + ": bad side size");
            g.n = n;
            continue;
        }
        int a, b;
        if (!(ss >> a >> b) || a < 1 || a > n || b < 1 || b > n)
            throw InvalidInput("line " + std::to_string(line_no) + ": bad edge");
        g.edges.push_back({a, b});
    }
    if (n < 0) throw InvalidInput("empty bipartite file: missing header");
    return g;
}

inline void write_bipartite(const BipartiteGraph& g, std::ostream& out) {
    out << g.n << '\n';
    for (auto [a, b] : g.edges) out << a << ' ' << b << '\n';
}

} // namespace hampack
