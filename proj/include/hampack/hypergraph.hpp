#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "hampack/combinatorics.hpp"
#include "hampack/errors.hpp"
#include "hampack/rng.hpp"

namespace hampack {

using Vertex = std::int32_t;
using Edge = std::vector<Vertex>; // ascending, k distinct vertices in 1..n

/// Strictly ascending set of distinct vertices of a host hypergraph.
struct VertexSet {
    std::vector<Vertex> vertices;

    static VertexSet of(std::vector<Vertex> vs) {
        std::sort(vs.begin(), vs.end());
        for (std::size_t i = 0; i + 1 < vs.size(); ++i)
            if (vs[i] == vs[i + 1]) throw InvalidInput("VertexSet: duplicate vertex");
        return VertexSet{std::move(vs)};
    }

    std::size_t size() const { return vertices.size(); }
};

/// Immutable k-uniform hypergraph on vertex set {1..n}. Edges are stored
/// canonically (each ascending, the edge list sorted lexicographically) and
/// membership is answered from the colex rank: a bitset over C(n,k) when
/// that fits the budget, a hash set of ranks otherwise.
class Hypergraph {
public:
    // Membership bitset budget: C(n,k) bits, at most 16 MiB.
    static constexpr std::uint64_t kBitsetBudgetBits = 1ULL << 27;

    Hypergraph(int n, int k, std::vector<Edge> edges) : n_(n), k_(k), binom_(n, k) {
        if (k < 2) throw InvalidInput("Hypergraph: k must be >= 2");
        if (k > n) throw InvalidInput("Hypergraph: k must be <= n");
        total_ksets_ = binom_(n, k);
        use_bitset_ = total_ksets_ <= kBitsetBudgetBits;
        if (use_bitset_) bits_.assign((total_ksets_ + 63) / 64, 0);

        for (auto& e : edges) canonicalize_in_place(e);
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

        verts_.reserve(edges.size() * static_cast<std::size_t>(k));
        for (const auto& e : edges) {
            verts_.insert(verts_.end(), e.begin(), e.end());
            mark_present(binom_.rank(e.begin(), e.end()));
        }
        m_ = edges.size();
    }

    int n() const { return n_; }
    int k() const { return k_; }
    std::size_t m() const { return m_; }

    /// Number of possible k-sets, C(n,k).
    std::uint64_t total_ksets() const { return total_ksets_; }

    /// Empirical density m / C(n,k).
    double density() const { return static_cast<double>(m_) / static_cast<double>(total_ksets_); }

    std::span<const Vertex> edge(std::size_t i) const {
        return {verts_.data() + i * static_cast<std::size_t>(k_), static_cast<std::size_t>(k_)};
    }

    std::uint64_t rank_of(std::span<const Vertex> ascending_edge) const {
        return binom_.rank(ascending_edge.begin(), ascending_edge.end());
    }

    /// Membership of an ascending k-tuple.
    bool contains(std::span<const Vertex> ascending_edge) const {
        return is_present(rank_of(ascending_edge));
    }

    bool contains(const Edge& e) const { return contains(std::span<const Vertex>(e)); }

    /// Membership applied to an arbitrary-order k-tuple.
    bool contains_any_order(Edge e) const {
        canonicalize_in_place(e);
        return contains(e);
    }

    /// d_H(S): number of (k-|S|)-sets completing S to an edge.
    std::size_t degree(const VertexSet& s) const {
        std::size_t d = 0;
        scan_supersets(s, [&](std::span<const Vertex>) { ++d; });
        return d;
    }

    /// N_H(S): the completions E \ S over edges E containing S, lex sorted.
    std::vector<Edge> neighborhood(const VertexSet& s) const {
        std::vector<Edge> out;
        scan_supersets(s, [&](std::span<const Vertex> e) {
            Edge c;
            c.reserve(static_cast<std::size_t>(k_) - s.size());
            std::set_difference(e.begin(), e.end(), s.vertices.begin(), s.vertices.end(),
                                std::back_inserter(c));
            out.push_back(std::move(c));
        });
        return out;
    }

    const BinomTable& binom() const { return binom_; }

private:
    void canonicalize_in_place(Edge& e) const {
        if (static_cast<int>(e.size()) != k_)
            throw InvalidInput("Hypergraph: edge arity " + std::to_string(e.size()) +
                               ", expected " + std::to_string(k_));
        std::sort(e.begin(), e.end());
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] < 1 || e[i] > n_) throw InvalidInput("Hypergraph: vertex out of range 1..n");
            if (i > 0 && e[i] == e[i - 1]) throw InvalidInput("Hypergraph: repeated vertex in edge");
        }
    }

    void mark_present(std::uint64_t rank) {
        if (use_bitset_) bits_[rank >> 6] |= 1ULL << (rank & 63);
        else hash_.insert(rank);
    }

    bool is_present(std::uint64_t rank) const {
        if (rank >= total_ksets_) return false;
        if (use_bitset_) return (bits_[rank >> 6] >> (rank & 63)) & 1u;
        return hash_.count(rank) > 0;
    }

    template <class Fn>
    void scan_supersets(const VertexSet& s, Fn&& fn) const {
        if (s.size() == 0 || s.size() >= static_cast<std::size_t>(k_))
            throw InvalidInput("neighborhood query requires 0 < |S| < k");
        for (Vertex v : s.vertices)
            if (v < 1 || v > n_) throw InvalidInput("neighborhood query: vertex out of range");
        for (std::size_t i = 0; i < m_; ++i) {
            auto e = edge(i);
            if (std::includes(e.begin(), e.end(), s.vertices.begin(), s.vertices.end())) fn(e);
        }
    }

    int n_;
    int k_;
    BinomTable binom_;
    std::uint64_t total_ksets_ = 0;
    std::size_t m_ = 0;
    std::vector<Vertex> verts_; // flat, m*k, lex-sorted edges
    bool use_bitset_ = false;
    std::vector<std::uint64_t> bits_;
    std::unordered_set<std::uint64_t> hash_;
};

/// Result of a neighborhood query: d_H(S) and N_H(S).
struct NeighborhoodResult {
    std::size_t degree;
    std::vector<Edge> neighborhood;
};

inline NeighborhoodResult neighborhood_query(const Hypergraph& h, const VertexSet& s) {
    auto nb = h.neighborhood(s);
    return NeighborhoodResult{nb.size(), std::move(nb)};
}

/// Samples H(n,p,k): every k-set present independently with probability p.
/// Presence of each k-set is decided by a substream derived from (seed,
/// colex rank), so the result is independent of enumeration order.
inline Hypergraph generate_hnpk(int n, int k, double p, std::uint64_t seed) {
    if (k < 2 || k > n) throw InvalidInput("generate_hnpk: need 2 <= k <= n");
    if (p < 0.0 || p > 1.0) throw InvalidInput("generate_hnpk: p must be in [0,1]");
    BinomTable binom(n, k);
    std::uint64_t total = binom(n, k);
    if (total > (1ULL << 32))
        throw InvalidInput("generate_hnpk: C(n,k) too large to enumerate");
    std::vector<Edge> edges;
    Edge buf(static_cast<std::size_t>(k));
    for (std::uint64_t r = 0; r < total; ++r) {
        bool present;
        if (p >= 1.0) present = true;
        else if (p <= 0.0) present = false;
        else {
            Rng rng(derive_seed(seed, streams::kEdgePresence, r));
            present = rng.next_unit() < p;
        }
        if (present) {
            binom.unrank(r, k, buf.data());
            edges.push_back(buf);
        }
    }
    return Hypergraph(n, k, std::move(edges));
}

// ---------------------------------------------------------------------------
// Text format: first non-comment line "k n", then one edge per non-comment
// line as k ascending space-separated integers. Lines starting '#' ignored.
// ---------------------------------------------------------------------------

inline Hypergraph parse_hypergraph(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    int n = -1, k = -1;
    std::vector<Edge> edges;
    std::unordered_set<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ss(line);
        if (k < 0) {
            if (!(ss >> k >> n) || k < 2 || n < k)
                throw InvalidInput("line " + std::to_string(line_no) + ": bad header, expected \"k n\"");
            std::string rest;
            if (ss >> rest) throw InvalidInput("line " + std::to_string(line_no) + ": trailing tokens after header");
            continue;
        }
        Edge e;
        long long v;
        while (ss >> v) e.push_back(static_cast<Vertex>(v));
        if (!ss.eof())
            throw InvalidInput("line " + std::to_string(line_no) + ": non-integer token");
        if (static_cast<int>(e.size()) != k)
            throw InvalidInput("line " + std::to_string(line_no) + ": expected " + std::to_string(k) +
                               " vertices, got " + std::to_string(e.size()));
        std::sort(e.begin(), e.end());
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] < 1 || e[i] > n)
                throw InvalidInput("line " + std::to_string(line_no) + ": vertex out of range 1.." +
                                   std::to_string(n));
            if (i > 0 && e[i] == e[i - 1])
                throw InvalidInput("line " + std::to_string(line_no) + ": repeated vertex in edge");
        }
        std::string key;
        for (Vertex u : e) key += std::to_string(u) + ",";
        if (!seen.insert(key).second)
            throw InvalidInput("line " + std::to_string(line_no) + ": duplicate edge");
        edges.push_back(std::move(e));
    }
    if (k < 0) throw InvalidInput("empty hypergraph file: missing header");
    return Hypergraph(n, k, std::move(edges));
}

/// Canonical form: header, then edges in lexicographic order.
inline void write_hypergraph(const Hypergraph& h, std::ostream& out) {
    out << h.k() << ' ' << h.n() << '\n';
    for (std::size_t i = 0; i < h.m(); ++i) {
        auto e = h.edge(i);
        for (std::size_t j = 0; j < e.size(); ++j) out << (j ? " " : "") << e[j];
        out << '\n';
    }
}

inline std::string write_hypergraph(const Hypergraph& h) {
    std::ostringstream ss;
    write_hypergraph(h, ss);
    return ss.str();
}

} // namespace hampack
