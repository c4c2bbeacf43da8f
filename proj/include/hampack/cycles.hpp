#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hampack/errors.hpp"
#include "hampack/hypergraph.hpp"
#include "hampack/partitions.hpp"

namespace hampack {

/// Type-ell Hamilton cycle: a cyclic order of 1..n whose edges are the k-
/// windows at offsets j*ell, consecutive edges differing in exactly ell
/// vertices. Edge j is the window starting at cyclic offset j*ell.
struct TypeLCycle {
    int ell = 0;
    std::vector<Vertex> order; // n vertices
    std::vector<Edge> edges;   // nu = n/ell edges, traversal order

    bool operator==(const TypeLCycle&) const = default;
};

/// Perfect matching of a hypergraph: nu_k = n/k pairwise disjoint k-blocks
/// covering 1..n.
struct HyperMatching {
    std::vector<Edge> blocks;

    bool operator==(const HyperMatching&) const = default;
};

struct CycleVerdict {
    bool ok = true;
    std::string reason; // empty when ok
    int window = -1;    // first failing window where applicable

    explicit operator bool() const { return ok; }
};

namespace detail {

inline Edge window_of(const std::vector<Vertex>& order, std::size_t start, int k) {
    Edge w;
    w.reserve(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) w.push_back(order[(start + static_cast<std::size_t>(t)) % order.size()]);
    std::sort(w.begin(), w.end());
    return w;
}

inline std::size_t difference_size(const Edge& a, const Edge& b) {
    std::size_t d = 0;
    auto it = b.begin();
    for (Vertex v : a) {
        while (it != b.end() && *it < v) ++it;
        if (it == b.end() || *it != v) ++d;
    }
    return d;
}

} // namespace detail

/// Checks every TypeLCycle invariant against H; reports the first violation.
inline CycleVerdict validate_cycle(const Hypergraph& h, const TypeLCycle& c) {
    const int n = h.n();
    const int k = h.k();
    if (c.ell < 1 || n % c.ell != 0)
        throw InvalidInput("validate_cycle: ell must divide n");
    const std::size_t nu = static_cast<std::size_t>(n / c.ell);

    if (c.order.size() != static_cast<std::size_t>(n))
        return {false, "order must list all n vertices", -1};
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (Vertex v : c.order) {
        if (v < 1 || v > n || seen[static_cast<std::size_t>(v)])
            return {false, "order is not a permutation of 1..n", -1};
        seen[static_cast<std::size_t>(v)] = true;
    }
    if (c.edges.size() != nu)
        return {false, "expected " + std::to_string(nu) + " edges, got " + std::to_string(c.edges.size()), -1};

    for (std::size_t j = 0; j < nu; ++j) {
        Edge w = detail::window_of(c.order, j * static_cast<std::size_t>(c.ell), k);
        if (w != c.edges[j])
            return {false, "edge does not match its window at window " + std::to_string(j),
                    static_cast<int>(j)};
        if (!h.contains(w))
            return {false, "missing edge at window " + std::to_string(j), static_cast<int>(j)};
    }
    for (std::size_t j = 0; j < nu; ++j) {
        const Edge& prev = c.edges[(j + nu - 1) % nu];
        const Edge& cur = c.edges[j];
        if (detail::difference_size(prev, cur) != static_cast<std::size_t>(c.ell))
            return {false, "|E_{j-1} \\ E_j| != ell at window " + std::to_string(j), static_cast<int>(j)};
    }
    // Difference sets partition 1..n.
    std::vector<int> covered(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t j = 0; j < nu; ++j) {
        const Edge& prev = c.edges[(j + nu - 1) % nu];
        for (Vertex v : c.edges[j])
            if (!std::binary_search(prev.begin(), prev.end(), v)) ++covered[static_cast<std::size_t>(v)];
    }
    for (int v = 1; v <= n; ++v)
        if (covered[static_cast<std::size_t>(v)] != 1)
            return {false, "difference sets do not partition 1..n", -1};
    return {};
}

inline CycleVerdict validate_matching(const Hypergraph& h, const HyperMatching& m) {
    const int n = h.n();
    const int k = h.k();
    if (n % k != 0) throw InvalidInput("validate_matching: k must divide n");
    if (m.blocks.size() != static_cast<std::size_t>(n / k))
        return {false, "expected " + std::to_string(n / k) + " blocks", -1};
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (std::size_t j = 0; j < m.blocks.size(); ++j) {
        const Edge& b = m.blocks[j];
        if (static_cast<int>(b.size()) != k) return {false, "block arity != k", static_cast<int>(j)};
        for (Vertex v : b) {
            if (v < 1 || v > n || seen[static_cast<std::size_t>(v)])
                return {false, "blocks do not partition 1..n", static_cast<int>(j)};
            seen[static_cast<std::size_t>(v)] = true;
        }
        if (!h.contains(b)) return {false, "missing block at " + std::to_string(j), static_cast<int>(j)};
    }
    return {};
}

// ---------------------------------------------------------------------------
// Assembly from auxiliary-graph solutions
// ---------------------------------------------------------------------------

namespace detail {

inline void check_permutation(const std::vector<std::int32_t>& v, int nu, const char* what) {
    if (static_cast<int>(v.size()) != nu) throw InvalidInput(std::string(what) + ": incomplete solution");
    std::vector<bool> seen(static_cast<std::size_t>(nu) + 1, false);
    for (std::int32_t x : v) {
        if (x < 1 || x > nu || seen[static_cast<std::size_t>(x)])
            throw InvalidInput(std::string(what) + ": incomplete solution");
        seen[static_cast<std::size_t>(x)] = true;
    }
}

} // namespace detail

/// Perfect matching phi (phi[a-1] = b) of the bipartite aux graph of a
/// bipartition-cycle scheme -> type-ell Hamilton cycle. Edge a is
/// X_a u Y_{phi(a)} u X_{a+1} and the order interleaves the blocks.
inline TypeLCycle assemble_bipartition_cycle(const PartitionScheme& s,
                                             const std::vector<std::int32_t>& phi) {
    if (s.mode != PartitionMode::BipartitionCycle)
        throw UnsupportedCase("assemble_bipartition_cycle: wrong scheme mode");
    const int nu = s.nu();
    detail::check_permutation(phi, nu, "assemble_bipartition_cycle");

    TypeLCycle c;
    c.ell = s.ell;
    c.order.reserve(static_cast<std::size_t>(s.n));
    for (int a = 0; a < nu; ++a) {
        const auto& xb = s.x_blocks[static_cast<std::size_t>(a)];
        const auto& yb = s.y_blocks[static_cast<std::size_t>(phi[static_cast<std::size_t>(a)] - 1)];
        c.order.insert(c.order.end(), xb.begin(), xb.end());
        c.order.insert(c.order.end(), yb.begin(), yb.end());
    }
    c.edges.reserve(static_cast<std::size_t>(nu));
    for (int a = 0; a < nu; ++a) {
        Edge e;
        const auto& x1 = s.x_blocks[static_cast<std::size_t>(a)];
        const auto& yb = s.y_blocks[static_cast<std::size_t>(phi[static_cast<std::size_t>(a)] - 1)];
        const auto& x2 = s.x_blocks[static_cast<std::size_t>((a + 1) % nu)];
        e.insert(e.end(), x1.begin(), x1.end());
        e.insert(e.end(), yb.begin(), yb.end());
        e.insert(e.end(), x2.begin(), x2.end());
        std::sort(e.begin(), e.end());
        c.edges.push_back(std::move(e));
    }
    return c;
}

/// Perfect matching of a k = ell scheme -> hypergraph perfect matching with
/// blocks X_a u Y_{phi(a)}, listed in lexicographic order.
inline HyperMatching assemble_hyper_matching(const PartitionScheme& s,
                                             const std::vector<std::int32_t>& phi) {
    if (s.mode != PartitionMode::Matching)
        throw UnsupportedCase("assemble_hyper_matching: wrong scheme mode");
    const int nu = s.nu();
    detail::check_permutation(phi, nu, "assemble_hyper_matching");
    HyperMatching m;
    m.blocks.reserve(static_cast<std::size_t>(nu));
    for (int a = 0; a < nu; ++a) {
        Edge b;
        const auto& xb = s.x_blocks[static_cast<std::size_t>(a)];
        const auto& yb = s.y_blocks[static_cast<std::size_t>(phi[static_cast<std::size_t>(a)] - 1)];
        b.insert(b.end(), xb.begin(), xb.end());
        b.insert(b.end(), yb.begin(), yb.end());
        std::sort(b.begin(), b.end());
        m.blocks.push_back(std::move(b));
    }
    std::sort(m.blocks.begin(), m.blocks.end());
    return m;
}

/// Hamilton cycle of the part graph of a full-partition scheme -> type-ell
/// cycle whose order concatenates the parts along the graph cycle.
inline TypeLCycle assemble_full_partition_cycle(const PartitionScheme& s,
                                                const std::vector<std::int32_t>& part_cycle) {
    if (s.mode != PartitionMode::FullPartition)
        throw UnsupportedCase("assemble_full_partition_cycle: wrong scheme mode");
    const int nu = s.nu();
    detail::check_permutation(part_cycle, nu, "assemble_full_partition_cycle");

    TypeLCycle c;
    c.ell = s.ell;
    c.order.reserve(static_cast<std::size_t>(s.n));
    for (std::int32_t u : part_cycle) {
        const auto& blk = s.x_blocks[static_cast<std::size_t>(u - 1)];
        c.order.insert(c.order.end(), blk.begin(), blk.end());
    }
    c.edges.reserve(static_cast<std::size_t>(nu));
    for (int j = 0; j < nu; ++j) {
        Edge e;
        const auto& b1 = s.x_blocks[static_cast<std::size_t>(part_cycle[static_cast<std::size_t>(j)] - 1)];
        const auto& b2 = s.x_blocks[static_cast<std::size_t>(part_cycle[static_cast<std::size_t>((j + 1) % nu)] - 1)];
        e.insert(e.end(), b1.begin(), b1.end());
        e.insert(e.end(), b2.begin(), b2.end());
        std::sort(e.begin(), e.end());
        c.edges.push_back(std::move(e));
    }
    return c;
}

// ---------------------------------------------------------------------------
// Rotation / reversal / canonical representative
// ---------------------------------------------------------------------------

/// Rotates the traversal by `shift` edges (order shifts by shift*ell).
inline TypeLCycle rotated(const TypeLCycle& c, int shift) {
    const int n = static_cast<int>(c.order.size());
    const int nu = static_cast<int>(c.edges.size());
    if (nu == 0) return c;
    shift = ((shift % nu) + nu) % nu;
    TypeLCycle out;
    out.ell = c.ell;
    out.order.reserve(c.order.size());
    const int off = shift * c.ell;
    for (int i = 0; i < n; ++i) out.order.push_back(c.order[static_cast<std::size_t>((i + off) % n)]);
    out.edges.reserve(c.edges.size());
    for (int j = 0; j < nu; ++j) out.edges.push_back(c.edges[static_cast<std::size_t>((j + shift) % nu)]);
    return out;
}

/// Traversal reversal. The flat order is reversed and then realigned to the
/// window grid (shift by (ell - k mod ell) mod ell), which preserves the
/// edge sets while reversing their traversal order.
inline TypeLCycle reversed(const TypeLCycle& c) {
    const int n = static_cast<int>(c.order.size());
    if (c.edges.empty()) return c;
    const int k = static_cast<int>(c.edges.front().size());
    const int s = (c.ell - (k % c.ell)) % c.ell;
    TypeLCycle out;
    out.ell = c.ell;
    out.order.reserve(c.order.size());
    for (int i = 0; i < n; ++i)
        out.order.push_back(c.order[static_cast<std::size_t>(((n - 1 - (i + s)) % n + n) % n)]);
    const std::size_t nu = c.edges.size();
    out.edges.reserve(nu);
    for (std::size_t j = 0; j < nu; ++j)
        out.edges.push_back(detail::window_of(out.order, j * static_cast<std::size_t>(c.ell), k));
    return out;
}

/// Canonical representative: the lexicographically smallest `order` among
/// the 2*nu structure-preserving representations (all rotations of both
/// traversal directions). Used for deduplication and stable output.
inline TypeLCycle normalized(const TypeLCycle& c) {
    if (c.edges.empty()) return c;
    TypeLCycle best = c;
    const int nu = static_cast<int>(c.edges.size());
    for (int dir = 0; dir < 2; ++dir) {
        TypeLCycle base = dir == 0 ? c : reversed(c);
        for (int shift = 0; shift < nu; ++shift) {
            TypeLCycle cand = rotated(base, shift);
            if (cand.order < best.order) best = std::move(cand);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Packing results
// ---------------------------------------------------------------------------

struct InstanceHarvest {
    std::int64_t instance_id = 0;
    std::int64_t aux_edges = 0;
    std::int64_t items = 0;

    bool operator==(const InstanceHarvest&) const = default;
};

struct PackingResult {
    enum class Kind { CyclePacking, MatchingPacking };

    Kind kind = Kind::CyclePacking;
    std::vector<TypeLCycle> cycles;
    std::vector<HyperMatching> matchings;
    std::vector<InstanceHarvest> per_instance;

    std::size_t items() const {
        return kind == Kind::CyclePacking ? cycles.size() : matchings.size();
    }
};

struct PackingVerdict {
    bool ok = true;
    std::string reason;

    explicit operator bool() const { return ok; }
};

/// Every item must validate against H and no hyperedge may repeat across
/// items; reports the first collision with both item indices.
inline PackingVerdict verify_packing(const Hypergraph& h, const PackingResult& r) {
    std::map<Edge, std::size_t> owner;
    auto check_edges = [&](const std::vector<Edge>& es, std::size_t item) -> PackingVerdict {
        for (const Edge& e : es) {
            auto [it, fresh] = owner.insert({e, item});
            if (!fresh) {
                std::ostringstream ss;
                ss << "hyperedge {";
                for (std::size_t i = 0; i < e.size(); ++i) ss << (i ? "," : "") << e[i];
                ss << "} reused by items " << it->second << " and " << item;
                return {false, ss.str()};
            }
        }
        return {};
    };
    for (std::size_t i = 0; i < r.cycles.size(); ++i) {
        auto v = validate_cycle(h, r.cycles[i]);
        if (!v.ok) return {false, "cycle " + std::to_string(i) + ": " + v.reason};
        if (auto d = check_edges(r.cycles[i].edges, i); !d.ok) return d;
    }
    for (std::size_t i = 0; i < r.matchings.size(); ++i) {
        auto v = validate_matching(h, r.matchings[i]);
        if (!v.ok) return {false, "matching " + std::to_string(i) + ": " + v.reason};
        if (auto d = check_edges(r.matchings[i].blocks, r.cycles.size() + i); !d.ok) return d;
    }
    return {};
}

// ---------------------------------------------------------------------------
// Cycle file format: per record, "cycle ell" + order line + nu edge lines,
// or "matching k" + nu block lines.
// ---------------------------------------------------------------------------

inline void write_packing(const PackingResult& r, std::ostream& out) {
    for (const auto& c : r.cycles) {
        out << "cycle " << c.ell << '\n';
        for (std::size_t i = 0; i < c.order.size(); ++i) out << (i ? " " : "") << c.order[i];
        out << '\n';
        for (const auto& e : c.edges) {
            for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
            out << '\n';
        }
    }
    for (const auto& m : r.matchings) {
        if (m.blocks.empty()) continue;
        out << "matching " << m.blocks.front().size() << '\n';
        for (const auto& b : m.blocks) {
            for (std::size_t i = 0; i < b.size(); ++i) out << (i ? " " : "") << b[i];
            out << '\n';
        }
    }
}

inline std::string write_packing(const PackingResult& r) {
    std::ostringstream ss;
    write_packing(r, ss);
    return ss.str();
}

/// Parses cycle/matching records for a host hypergraph of shape (n, k).
inline PackingResult parse_packing(std::istream& in, int n, int k) {
    PackingResult r;
    std::string line;
    std::size_t line_no = 0;
    auto next_content_line = [&](std::string& out_line) -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            std::size_t first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            out_line = line;
            return true;
        }
        return false;
    };
    auto parse_ints = [&](const std::string& text, std::size_t expect) {
        std::istringstream ss(text);
        std::vector<Vertex> vs;
        long long v;
        while (ss >> v) vs.push_back(static_cast<Vertex>(v));
        if (!ss.eof() || vs.size() != expect)
            throw InvalidInput("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(expect) + " integers");
        return vs;
    };

    std::string header;
    while (next_content_line(header)) {
        std::istringstream hs(header);
        std::string tag;
        int param = 0;
        if (!(hs >> tag >> param))
            throw InvalidInput("line " + std::to_string(line_no) + ": bad record header");
        if (tag == "cycle") {
            if (param < 1 || n % param != 0)
                throw InvalidInput("line " + std::to_string(line_no) + ": ell must divide n");
            TypeLCycle c;
            c.ell = param;
            std::string body;
            if (!next_content_line(body)) throw InvalidInput("unexpected EOF in cycle record");
            c.order = parse_ints(body, static_cast<std::size_t>(n));
            const std::size_t nu = static_cast<std::size_t>(n / param);
            for (std::size_t j = 0; j < nu; ++j) {
                if (!next_content_line(body)) throw InvalidInput("unexpected EOF in cycle record");
                c.edges.push_back(parse_ints(body, static_cast<std::size_t>(k)));
            }
            r.cycles.push_back(std::move(c));
        } else if (tag == "matching") {
            if (param != k)
                throw InvalidInput("line " + std::to_string(line_no) + ": matching arity != k");
            if (n % k != 0) throw InvalidInput("line " + std::to_string(line_no) + ": k must divide n");
            HyperMatching m;
            std::string body;
            for (int j = 0; j < n / k; ++j) {
                if (!next_content_line(body)) throw InvalidInput("unexpected EOF in matching record");
                m.blocks.push_back(parse_ints(body, static_cast<std::size_t>(k)));
            }
            r.matchings.push_back(std::move(m));
        } else {
            throw InvalidInput("line " + std::to_string(line_no) + ": unknown record tag '" + tag + "'");
        }
    }
    r.kind = r.matchings.empty() ? PackingResult::Kind::CyclePacking : PackingResult::Kind::MatchingPacking;
    return r;
}

} // namespace hampack
