#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "hampack/combinatorics.hpp"
#include "hampack/errors.hpp"
#include "hampack/graphs.hpp"
#include "hampack/hypergraph.hpp"
#include "hampack/partitions.hpp"
#include "hampack/rng.hpp"

namespace hampack {

/// Edge of an auxiliary graph together with the hyperedge it encodes.
struct AuxEdge {
    std::int32_t a = 0;
    std::int32_t b = 0;          // a < b in full-partition mode
    std::size_t hyperedge = 0;   // edge index into the host hypergraph
};

/// Per-instance auxiliary graph G_i: bipartite on [nu] x [nu] in the
/// bipartition and matching modes, simple on [nu] in full-partition mode.
struct AuxGraph {
    PartitionMode mode = PartitionMode::BipartitionCycle;
    int n_side = 0; // nu
    std::vector<AuxEdge> edges;

    bool bipartite() const { return mode != PartitionMode::FullPartition; }

    BipartiteGraph as_bipartite() const {
        BipartiteGraph g{n_side, {}};
        g.edges.reserve(edges.size());
        for (const auto& e : edges) g.edges.push_back({e.a, e.b});
        return g;
    }

    SimpleGraph as_simple() const {
        SimpleGraph g{n_side, {}};
        g.edges.reserve(edges.size());
        for (const auto& e : edges) g.edges.push_back({e.a, e.b});
        return g;
    }
};

/// Collects the aux edges of instance s.id from the labeled edge set. The
/// witness recorded at labeling time gives each aux edge's position.
inline AuxGraph build_aux_graph(const Hypergraph& h, const PartitionScheme& s,
                                const LabeledEdgeSet& labels) {
    if (labels.label.size() != h.m()) throw InvalidInput("build_aux_graph: labels do not match H");
    AuxGraph g;
    g.mode = s.mode;
    g.n_side = s.nu();
    std::set<std::pair<std::int32_t, std::int32_t>> seen;
    for (std::size_t e = 0; e < h.m(); ++e) {
        if (labels.label[e] != s.id) continue;
        InclusionWitness w = labels.witness[e];
        require_invariant(seen.insert({w.a, w.b}).second,
                          "build_aux_graph: two hyperedges mapped to one aux edge");
        g.edges.push_back({w.a, w.b, e});
    }
    return g;
}

// ---------------------------------------------------------------------------
// Audits
// ---------------------------------------------------------------------------

struct AuditMode {
    bool exact = true;
    std::int64_t samples = 0;

    static AuditMode exact_mode() { return {true, 0}; }
    static AuditMode sampled(std::int64_t count) { return {false, count}; }
};

/// One audited property. `slack` is the parameter value (eps or theta) at
/// which the property would be exactly tight, ignoring integer rounding;
/// negative slack means the bound holds with room to spare.
struct AuditReport {
    std::string property;
    std::string mode; // "exact" | "sampled(N)" | "sampled(N,downgraded)"
    bool pass = false;
    std::string witness;
    double slack = 0.0;

    bool operator==(const AuditReport&) const = default;
};

enum class DegreeFamily { P, R };

namespace detail {

inline std::string set_to_string(const std::vector<Vertex>& s) {
    std::ostringstream ss;
    ss << '{';
    for (std::size_t i = 0; i < s.size(); ++i) ss << (i ? "," : "") << s[i];
    ss << '}';
    return ss.str();
}

/// Subset degree map for one subset size: rank -> d_H(S), absent = 0.
inline std::unordered_map<std::uint64_t, std::uint32_t> subset_degrees(const Hypergraph& h, int a) {
    std::unordered_map<std::uint64_t, std::uint32_t> deg;
    std::vector<Vertex> sub(static_cast<std::size_t>(a));
    for (std::size_t e = 0; e < h.m(); ++e) {
        auto edge = h.edge(e);
        for_each_combination(h.k(), a, [&](const std::vector<Vertex>& idx) {
            for (int i = 0; i < a; ++i)
                sub[static_cast<std::size_t>(i)] = edge[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)] - 1)];
            std::sort(sub.begin(), sub.end());
            ++deg[h.binom().rank(sub.begin(), sub.end())];
        });
    }
    return deg;
}

/// Neighborhood map for one subset size: rank(S) -> sorted complement ranks.
inline std::unordered_map<std::uint64_t, std::vector<std::uint64_t>>
subset_neighborhoods(const Hypergraph& h, int a) {
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> nb;
    const int k = h.k();
    BinomTable comp_table(h.n(), k - a);
    std::vector<Vertex> sub(static_cast<std::size_t>(a));
    std::vector<Vertex> comp(static_cast<std::size_t>(k - a));
    for (std::size_t e = 0; e < h.m(); ++e) {
        auto edge = h.edge(e);
        for_each_combination(k, a, [&](const std::vector<Vertex>& idx) {
            std::size_t ci = 0, si = 0;
            int next = 0;
            for (int i = 0; i < k; ++i) {
                if (next < a && idx[static_cast<std::size_t>(next)] - 1 == i) {
                    sub[si++] = edge[static_cast<std::size_t>(i)];
                    ++next;
                } else {
                    comp[ci++] = edge[static_cast<std::size_t>(i)];
                }
            }
            std::sort(sub.begin(), sub.end());
            nb[h.binom().rank(sub.begin(), sub.end())].push_back(
                comp_table.rank(comp.begin(), comp.end()));
        });
    }
    for (auto& [r, v] : nb) std::sort(v.begin(), v.end());
    return nb;
}

inline std::size_t sorted_intersection_size(const std::vector<std::uint64_t>& a,
                                            const std::vector<std::uint64_t>& b) {
    std::size_t i = 0, j = 0, c = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (a[i] > b[j]) ++j;
        else { ++c; ++i; ++j; }
    }
    return c;
}

inline std::vector<Vertex> random_subset(int n, int a, Rng& rng, std::vector<Vertex>& pool) {
    // pool must be a permutation-capable buffer of 1..n.
    for (int i = 0; i < a; ++i) {
        std::size_t j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    std::vector<Vertex> out(pool.begin(), pool.begin() + a);
    std::sort(out.begin(), out.end());
    return out;
}

struct PropertySpec {
    std::string name;
    int set_size = 0;
    bool pair = false;
    int pair_overlap = -1; // pair properties: second allowed |S1 ^ S2| besides 0; -1 = disjoint only
    bool is_min = false;
    double base = 0.0; // bound is ceil((1-eps) base) for min, round((1+eps) base) for max
    bool round_up = false; // rounding of the max-type bound
};

} // namespace detail

/// The degree/co-degree pseudo-randomness audit. Family P covers
/// k/2 < ell < k, family R covers ell = k; p is H's empirical density.
/// Exact mode enumerates all sets (or pairs) up to a 10^6 cap and
/// downgrades to sampling beyond it.
inline std::vector<AuditReport> audit_degree_properties(const Hypergraph& h, int ell, double eps,
                                                        AuditMode mode, DegreeFamily family,
                                                        std::uint64_t seed = 0) {
    const int n = h.n();
    const int k = h.k();
    const double p = h.density();

    std::vector<detail::PropertySpec> specs;
    if (family == DegreeFamily::P) {
        if (!(2 * ell > k && ell < k))
            throw UnsupportedCase("family P requires k/2 < ell < k");
        const int u = k - ell;     // X-block size
        const int w = 2 * ell - k; // Y-block size
        specs = {
            {"P_a", 2 * u, false, -1, true, binom_d(n - 2 * u, w) * p, false},
            {"P_b", w, false, -1, true, binom_d(n - w, 2 * u) * p, false},
            {"P_c", 2 * u + 1, false, -1, false, binom_d(n - 2 * u - 1, w - 1) * p, false},
            {"P_d", w + 1, false, -1, false, binom_d(n - w - 1, 2 * u - 1) * p, false},
            {"P_e", w, true, -1, false, binom_d(n - 2 * w, 2 * u) * p * p, false},
            {"P_f", 2 * u, true, u, false, binom_d(n, w) * p * p, false},
        };
    } else {
        if (ell != k) throw UnsupportedCase("family R requires ell = k");
        const int kx = k / 2;
        const int ky = k - k / 2;
        specs = {
            {"R_a", kx, false, -1, true, binom_d(n - kx, ky) * p, false},
            {"R_b", ky, false, -1, true, binom_d(n - ky, kx) * p, false},
            {"R_c", kx + 1, false, -1, false, binom_d(n - kx - 1, ky - 1) * p, true},
            {"R_d", ky + 1, false, -1, false, binom_d(n - ky - 1, kx - 1) * p, true},
            {"R_e", kx, true, -1, false, binom_d(n - 2 * kx, ky) * p * p, false},
            {"R_f", ky, true, -1, false, binom_d(n - 2 * ky, kx) * p * p, false},
        };
    }

    constexpr std::uint64_t kExactCap = 1000000;
    const std::int64_t default_samples = mode.exact ? 100000 : mode.samples;

    std::vector<AuditReport> out;
    for (const auto& spec : specs) {
        AuditReport rep;
        rep.property = spec.name;
        const int a = spec.set_size;

        // Empty hypergraph: a min-type bound cannot be met meaningfully.
        if (h.m() == 0 && spec.is_min) {
            rep.mode = "exact";
            rep.pass = false;
            rep.witness = "empty hypergraph: every S has degree 0";
            rep.slack = 1.0;
            out.push_back(std::move(rep));
            continue;
        }

        const double n_sets = binom_d(n, a);
        const double enumerated = spec.pair ? n_sets * (n_sets - 1) / 2 : n_sets;
        bool exact = mode.exact && enumerated <= static_cast<double>(kExactCap);
        std::int64_t samples = exact ? 0 : (mode.samples > 0 ? mode.samples : default_samples);
        rep.mode = exact ? "exact"
                         : (mode.exact ? "sampled(" + std::to_string(samples) + ",downgraded)"
                                       : "sampled(" + std::to_string(samples) + ")");

        double measured = spec.is_min ? std::numeric_limits<double>::infinity() : -1.0;
        std::string witness;

        if (!spec.pair) {
            auto deg = detail::subset_degrees(h, a);
            auto consider = [&](const std::vector<Vertex>& s) {
                auto it = deg.find(h.binom().rank(s.begin(), s.end()));
                double d = it == deg.end() ? 0.0 : static_cast<double>(it->second);
                if (spec.is_min ? d < measured : d > measured) {
                    measured = d;
                    witness = detail::set_to_string(s) + " d=" + std::to_string(static_cast<long long>(d));
                }
            };
            if (exact) {
                for_each_combination(n, a, consider);
            } else {
                Rng rng(derive_seed(seed, streams::kAudit, std::hash<std::string>{}(spec.name)));
                std::vector<Vertex> pool(static_cast<std::size_t>(n));
                std::iota(pool.begin(), pool.end(), 1);
                for (std::int64_t i = 0; i < samples; ++i)
                    consider(detail::random_subset(n, a, rng, pool));
            }
        } else {
            auto nb = detail::subset_neighborhoods(h, a);
            auto codeg = [&](const std::vector<Vertex>& s1, const std::vector<Vertex>& s2) {
                auto i1 = nb.find(h.binom().rank(s1.begin(), s1.end()));
                auto i2 = nb.find(h.binom().rank(s2.begin(), s2.end()));
                if (i1 == nb.end() || i2 == nb.end()) return 0.0;
                return static_cast<double>(detail::sorted_intersection_size(i1->second, i2->second));
            };
            auto allowed_overlap = [&](std::size_t ov) {
                return ov == 0 || (spec.pair_overlap >= 0 && ov == static_cast<std::size_t>(spec.pair_overlap));
            };
            auto consider = [&](const std::vector<Vertex>& s1, const std::vector<Vertex>& s2) {
                double d = codeg(s1, s2);
                if (d > measured) {
                    measured = d;
                    witness = detail::set_to_string(s1) + "," + detail::set_to_string(s2) +
                              " codeg=" + std::to_string(static_cast<long long>(d));
                }
            };
            if (exact) {
                std::vector<std::vector<Vertex>> sets;
                for_each_combination(n, a, [&](const std::vector<Vertex>& s) { sets.push_back(s); });
                std::vector<Vertex> inter;
                for (std::size_t i = 0; i < sets.size(); ++i)
                    for (std::size_t j = i + 1; j < sets.size(); ++j) {
                        inter.clear();
                        std::set_intersection(sets[i].begin(), sets[i].end(), sets[j].begin(),
                                              sets[j].end(), std::back_inserter(inter));
                        if (allowed_overlap(inter.size())) consider(sets[i], sets[j]);
                    }
                if (measured < 0) measured = 0; // no admissible pair
            } else {
                Rng rng(derive_seed(seed, streams::kAudit, std::hash<std::string>{}(spec.name)));
                std::vector<Vertex> pool(static_cast<std::size_t>(n));
                std::iota(pool.begin(), pool.end(), 1);
                const int t = spec.pair_overlap;
                const bool overlap_feasible = t > 0 && 2 * a - t <= n;
                for (std::int64_t i = 0; i < samples; ++i) {
                    bool use_overlap = overlap_feasible && (i % 2 == 1);
                    int shared = use_overlap ? t : 0;
                    if (2 * a - shared > n) continue;
                    auto both = detail::random_subset(n, 2 * a - shared, rng, pool);
                    // Split: shared part, then disjoint remainders.
                    std::vector<Vertex> s1(both.begin(), both.begin() + shared);
                    std::vector<Vertex> s2 = s1;
                    s1.insert(s1.end(), both.begin() + shared, both.begin() + a);
                    s2.insert(s2.end(), both.begin() + a, both.end());
                    std::sort(s1.begin(), s1.end());
                    std::sort(s2.begin(), s2.end());
                    consider(s1, s2);
                }
                if (measured < 0) measured = 0;
            }
        }

        double bound;
        if (spec.is_min) bound = std::ceil((1.0 - eps) * spec.base);
        else bound = spec.round_up ? std::ceil((1.0 + eps) * spec.base) : std::floor((1.0 + eps) * spec.base);
        rep.pass = spec.is_min ? measured >= bound : measured <= bound;
        if (spec.base > 0.0) rep.slack = spec.is_min ? 1.0 - measured / spec.base : measured / spec.base - 1.0;
        else rep.slack = spec.is_min ? 1.0 : 0.0;
        rep.witness = witness + " vs bound " + std::to_string(bound);
        out.push_back(std::move(rep));
    }
    return out;
}

/// (alpha, eps)-regularity audit of a simple graph: Q_a by exact degree
/// scan, Q_b over sampled disjoint pairs with sizes near the boundary.
inline std::vector<AuditReport> audit_regularity(const SimpleGraph& g, double alpha, double eps,
                                                 std::int64_t budget, std::uint64_t seed = 0) {
    const int n = g.n;
    if (eps <= 0.0 || eps >= 1.0) throw InvalidInput("audit_regularity: eps must be in (0,1)");
    if (budget < 1) throw InvalidInput("audit_regularity: budget must be >= 1");
    if (eps * n < 1.0) throw InvalidInput("audit_regularity: eps*N < 1 is degenerate");
    const int eps_size = static_cast<int>(std::ceil(eps * n));

    std::vector<AuditReport> out;

    std::vector<int> deg(static_cast<std::size_t>(n) + 1, 0);
    for (auto [u, v] : g.edges) {
        ++deg[static_cast<std::size_t>(u)];
        ++deg[static_cast<std::size_t>(v)];
    }
    int min_v = 1;
    for (int v = 2; v <= n; ++v)
        if (deg[static_cast<std::size_t>(v)] < deg[static_cast<std::size_t>(min_v)]) min_v = v;
    const double delta = n >= 1 ? deg[static_cast<std::size_t>(min_v)] : 0;
    AuditReport qa;
    qa.property = "Q_a";
    qa.mode = "exact";
    qa.pass = delta >= (alpha - eps) * n;
    qa.slack = alpha - delta / n;
    qa.witness = "min degree " + std::to_string(static_cast<long long>(delta)) + " at vertex " +
                 std::to_string(min_v);
    out.push_back(std::move(qa));

    // Q_b: sampled disjoint (S, T) with sizes at and above the eps boundary.
    std::vector<int> sizes = {eps_size, 2 * eps_size, n / 2};
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    std::vector<std::pair<int, int>> combos;
    for (int s : sizes)
        for (int t : sizes)
            if (s >= eps_size && t >= eps_size && s + t <= n && s >= 1 && t >= 1)
                combos.push_back({s, t});
    AuditReport qb;
    qb.property = "Q_b";
    qb.mode = "sampled(" + std::to_string(budget) + ")";
    if (combos.empty()) {
        qb.pass = true;
        qb.witness = "no feasible disjoint sizes";
        qb.slack = 0.0;
        out.push_back(std::move(qb));
        return out;
    }

    std::vector<std::vector<std::uint64_t>> adj(static_cast<std::size_t>(n) + 1,
                                                std::vector<std::uint64_t>((static_cast<std::size_t>(n) + 64) / 64, 0));
    for (auto [u, v] : g.edges) {
        adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v) >> 6] |= 1ULL << (v & 63);
        adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u) >> 6] |= 1ULL << (u & 63);
    }

    Rng rng(derive_seed(seed, streams::kAudit, 0x5162u));
    std::vector<Vertex> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 1);
    double worst = -1.0;
    std::string worst_desc;
    std::vector<std::uint64_t> t_mask((static_cast<std::size_t>(n) + 64) / 64, 0);
    for (std::int64_t i = 0; i < budget; ++i) {
        auto [s_size, t_size] = combos[static_cast<std::size_t>(i) % combos.size()];
        auto both = detail::random_subset(n, s_size + t_size, rng, pool);
        std::fill(t_mask.begin(), t_mask.end(), 0);
        for (int j = s_size; j < s_size + t_size; ++j) {
            Vertex v = both[static_cast<std::size_t>(j)];
            t_mask[static_cast<std::size_t>(v) >> 6] |= 1ULL << (v & 63);
        }
        long long cross = 0;
        for (int j = 0; j < s_size; ++j) {
            Vertex u = both[static_cast<std::size_t>(j)];
            for (std::size_t w = 0; w < t_mask.size(); ++w)
                cross += std::popcount(adj[static_cast<std::size_t>(u)][w] & t_mask[w]);
        }
        double dev = std::abs(static_cast<double>(cross) / (static_cast<double>(s_size) * t_size) - alpha);
        if (dev > worst) {
            worst = dev;
            worst_desc = "|S|=" + std::to_string(s_size) + ",|T|=" + std::to_string(t_size) +
                         " density deviation " + std::to_string(dev);
        }
    }
    qb.pass = worst <= eps;
    qb.slack = worst;
    qb.witness = worst_desc;
    out.push_back(std::move(qb));
    return out;
}

/// Q-audit of the part graph G_P of one full-partition scheme: vertices are
/// the parts, (u,v) an edge whenever the union of parts u and v is a
/// hyperedge. alpha is H's empirical density. Degenerate sizes are reported
/// rather than rejected: eps >= 1 makes both properties trivial, and
/// eps*nu < 1 makes them untestable (reported as non-certifying).
inline std::vector<AuditReport> audit_partition_regularity(const Hypergraph& h,
                                                           const PartitionScheme& s, double eps,
                                                           std::int64_t budget,
                                                           std::uint64_t seed = 0) {
    if (s.mode != PartitionMode::FullPartition)
        throw UnsupportedCase("audit_partition_regularity: full-partition scheme required");
    const std::string tag = "G_P of instance " + std::to_string(s.id) + ": ";
    auto stub = [&](bool pass, const std::string& mode, const std::string& why) {
        std::vector<AuditReport> out;
        for (const char* prop : {"Q_a", "Q_b"}) out.push_back({prop, mode, pass, tag + why, 0.0});
        return out;
    };
    if (eps >= 1.0) return stub(true, "exact", "trivially satisfied at eps >= 1");
    if (eps <= 0.0 || eps * s.nu() < 1.0) return stub(false, "skipped", "not testable: eps*nu < 1");

    SimpleGraph gp{s.nu(), {}};
    for (std::int32_t u = 1; u <= gp.n; ++u)
        for (std::int32_t v = u + 1; v <= gp.n; ++v) {
            Edge e;
            const auto& bu = s.x_blocks[static_cast<std::size_t>(u - 1)];
            const auto& bv = s.x_blocks[static_cast<std::size_t>(v - 1)];
            e.insert(e.end(), bu.begin(), bu.end());
            e.insert(e.end(), bv.begin(), bv.end());
            std::sort(e.begin(), e.end());
            if (h.contains(e)) gp.edges.push_back({u, v});
        }
    auto out = audit_regularity(gp, h.density(), eps, budget, seed);
    for (auto& r : out) r.witness = tag + r.witness;
    return out;
}

/// Degree/co-degree premise audit of a bipartite graph: minimum degree vs
/// (1-theta)dN and maximum same-side co-degree vs (1+theta)d^2 N. These two
/// premises certify a packing of at least (1-theta^{1/3})dN disjoint perfect
/// matchings. The co-degree report's witness carries the numeric side
/// condition theta^{4/3} d^2 N.
inline std::pair<AuditReport, AuditReport> audit_bipartite_premises(const BipartiteGraph& g,
                                                                    double d, double theta) {
    const int n = g.n;
    if (n <= 0) throw InvalidInput("audit_bipartite_premises: empty graph");

    const std::size_t words = (static_cast<std::size_t>(n) + 64) / 64;
    std::vector<std::vector<std::uint64_t>> rows_a(static_cast<std::size_t>(n) + 1,
                                                   std::vector<std::uint64_t>(words, 0));
    std::vector<std::vector<std::uint64_t>> rows_b(static_cast<std::size_t>(n) + 1,
                                                   std::vector<std::uint64_t>(words, 0));
    for (auto [a, b] : g.edges) {
        rows_a[static_cast<std::size_t>(a)][static_cast<std::size_t>(b) >> 6] |= 1ULL << (b & 63);
        rows_b[static_cast<std::size_t>(b)][static_cast<std::size_t>(a) >> 6] |= 1ULL << (a & 63);
    }

    int min_deg = INT32_MAX, min_vertex = 1;
    char min_side = 'A';
    auto scan_degrees = [&](const auto& rows, char side) {
        for (int v = 1; v <= n; ++v) {
            int dv = 0;
            for (std::size_t w = 0; w < words; ++w) dv += std::popcount(rows[static_cast<std::size_t>(v)][w]);
            if (dv < min_deg) {
                min_deg = dv;
                min_vertex = v;
                min_side = side;
            }
        }
    };
    scan_degrees(rows_a, 'A');
    scan_degrees(rows_b, 'B');

    long long max_codeg = -1;
    int arg1 = 0, arg2 = 0;
    char codeg_side = 'A';
    auto scan_codegrees = [&](const auto& rows, char side) {
        for (int v1 = 1; v1 <= n; ++v1)
            for (int v2 = v1 + 1; v2 <= n; ++v2) {
                long long c = 0;
                for (std::size_t w = 0; w < words; ++w)
                    c += std::popcount(rows[static_cast<std::size_t>(v1)][w] & rows[static_cast<std::size_t>(v2)][w]);
                if (c > max_codeg) {
                    max_codeg = c;
                    arg1 = v1;
                    arg2 = v2;
                    codeg_side = side;
                }
            }
    };
    scan_codegrees(rows_a, 'A');
    scan_codegrees(rows_b, 'B');
    if (max_codeg < 0) max_codeg = 0;

    const double dn = d * n;
    const double d2n = d * d * n;
    AuditReport deg_rep;
    deg_rep.property = "L2-degree";
    deg_rep.mode = "exact";
    deg_rep.pass = static_cast<double>(min_deg) >= (1.0 - theta) * dn;
    deg_rep.slack = dn > 0.0 ? 1.0 - static_cast<double>(min_deg) / dn : 1.0;
    deg_rep.witness = std::string("min degree ") + std::to_string(min_deg) + " at " + min_side +
                      std::to_string(min_vertex);

    AuditReport codeg_rep;
    codeg_rep.property = "L2-codegree";
    codeg_rep.mode = "exact";
    codeg_rep.pass = static_cast<double>(max_codeg) <= (1.0 + theta) * d2n;
    codeg_rep.slack = d2n > 0.0 ? static_cast<double>(max_codeg) / d2n - 1.0 : 0.0;
    {
        std::ostringstream ss;
        ss << "max co-degree " << max_codeg << " at " << codeg_side << arg1 << "," << codeg_side
           << arg2 << "; theta^{4/3} d^2 N = " << std::pow(theta, 4.0 / 3.0) * d2n;
        codeg_rep.witness = ss.str();
    }
    return {deg_rep, codeg_rep};
}

/// Smallest theta at which both premises hold for (G, d).
inline double measured_theta(const BipartiteGraph& g, double d) {
    auto [deg_rep, codeg_rep] = audit_bipartite_premises(g, d, 0.0);
    return std::max({deg_rep.slack, codeg_rep.slack, 0.0});
}

/// Concentration audit of the inclusion counts: reports the fraction of
/// edges with f(E) outside r rho +- sqrt(4 k r rho ln n) and the number of
/// unlabeled (f = 0) edges. Passes when the outside fraction is at most
/// 1/n + 10/sqrt(m).
inline AuditReport audit_inclusion_counts(const LabeledEdgeSet& labels, std::int64_t r, double rho,
                                          int n, int k) {
    AuditReport rep;
    rep.property = "f-window";
    rep.mode = "exact";
    const double m = static_cast<double>(labels.f.size());
    const double rrho = static_cast<double>(r) * rho;
    const double half_width = std::sqrt(4.0 * k * rrho * std::log(static_cast<double>(n)));
    const double lo = rrho - half_width;
    const double hi = rrho + half_width;

    std::size_t outside = 0, zeros = 0;
    for (std::uint32_t f : labels.f) {
        if (f == 0) ++zeros;
        if (static_cast<double>(f) < lo || static_cast<double>(f) > hi) ++outside;
    }
    const double fraction = m > 0 ? static_cast<double>(outside) / m : 0.0;
    const double threshold = 1.0 / n + (m > 0 ? 10.0 / std::sqrt(m) : 0.0);
    rep.pass = fraction <= threshold;
    rep.slack = fraction - threshold;
    std::ostringstream ss;
    ss << outside << " of " << labels.f.size() << " edges outside [" << lo << "," << hi << "]; "
       << zeros << " unlabeled";
    if (zeros == labels.f.size() && !labels.f.empty()) ss << " (full coverage loss)";
    rep.witness = ss.str();
    return rep;
}

} // namespace hampack
