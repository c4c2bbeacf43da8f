#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hampack/errors.hpp"
#include "hampack/hypergraph.hpp"
#include "hampack/rng.hpp"

namespace hampack {

/// How a partition instance decomposes edges, by (k, ell):
///   k/2 < ell < k  -> BipartitionCycle (X-blocks of size k-ell, Y-blocks of 2ell-k)
///   k = 2 ell      -> FullPartition (nu parts of size ell)
///   k = ell        -> Matching (X-blocks of size floor(k/2), Y-blocks of ceil(k/2))
enum class PartitionMode { BipartitionCycle, FullPartition, Matching };

inline const char* to_string(PartitionMode m) {
    switch (m) {
        case PartitionMode::BipartitionCycle: return "bipartition-cycle";
        case PartitionMode::FullPartition: return "full-partition";
        case PartitionMode::Matching: return "matching";
    }
    return "?";
}

inline std::optional<PartitionMode> parse_mode(const std::string& s) {
    if (s == "bipartition-cycle") return PartitionMode::BipartitionCycle;
    if (s == "full-partition") return PartitionMode::FullPartition;
    if (s == "matching") return PartitionMode::Matching;
    return std::nullopt;
}

/// Mode dispatch; nullopt for (k, ell) outside k/2 <= ell <= k.
inline std::optional<PartitionMode> mode_for(int k, int ell) {
    if (k < 2 || ell < 1 || ell > k) return std::nullopt;
    if (ell == k) return PartitionMode::Matching;
    if (2 * ell == k) return PartitionMode::FullPartition;
    if (2 * ell > k) return PartitionMode::BipartitionCycle;
    return std::nullopt;
}

/// Position of an edge inside an instance: block pair (a,b), 1-based.
/// BipartitionCycle: E = X_a u Y_b u X_{a+1} (cyclic).  Matching: E = X_a u Y_b.
/// FullPartition: E = X_a u X_b with a < b.
struct InclusionWitness {
    std::int32_t a = 0;
    std::int32_t b = 0;
    bool operator==(const InclusionWitness&) const = default;
};

/// One sampled partition instance: the ordered block structure that the
/// random split plus block-forming permutations induce. Blocks are stored
/// with ascending contents; block order is the instance's cyclic order.
struct PartitionScheme {
    std::int64_t id = 0;
    PartitionMode mode = PartitionMode::BipartitionCycle;
    int n = 0, k = 0, ell = 0;
    std::vector<std::vector<Vertex>> x_blocks;
    std::vector<std::vector<Vertex>> y_blocks; // empty in full-partition mode

    int nu() const { return n / ell; }

    /// Vertex lookup tables, built once per scheme. side 0 = X, 1 = Y.
    void build_index() {
        side_of.assign(static_cast<std::size_t>(n) + 1, -1);
        block_of.assign(static_cast<std::size_t>(n) + 1, -1);
        for (std::size_t b = 0; b < x_blocks.size(); ++b)
            for (Vertex v : x_blocks[b]) {
                side_of[static_cast<std::size_t>(v)] = 0;
                block_of[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(b);
            }
        for (std::size_t b = 0; b < y_blocks.size(); ++b)
            for (Vertex v : y_blocks[b]) {
                side_of[static_cast<std::size_t>(v)] = 1;
                block_of[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(b);
            }
    }

    std::vector<std::int8_t> side_of;
    std::vector<std::int32_t> block_of;
};

namespace detail {

inline void check_divisibility(int n, int ell) {
    if (ell < 1 || n % ell != 0)
        throw InvalidInput("ell = " + std::to_string(ell) + " must divide n = " + std::to_string(n));
}

inline PartitionMode checked_mode(int n, int k, int ell, PartitionMode mode) {
    check_divisibility(n, ell);
    auto derived = mode_for(k, ell);
    if (!derived)
        throw UnsupportedCase("no partition mode for k = " + std::to_string(k) +
                              ", ell = " + std::to_string(ell) + " (need k/2 <= ell <= k)");
    if (*derived != mode)
        throw UnsupportedCase(std::string("mode ") + to_string(mode) + " inconsistent with (k, ell)");
    if (mode != PartitionMode::Matching && n / ell < 3)
        throw UnsupportedCase("cycle modes require nu = n/ell >= 3");
    return mode;
}

} // namespace detail

/// Uniformly random partition instance i: a uniform shuffle of [n] realizes
/// both the side split and the block-forming permutations. Deterministic per
/// (seed, i).
inline PartitionScheme sample_scheme(int n, int k, int ell, PartitionMode mode,
                                     std::uint64_t seed, std::int64_t instance_id) {
    detail::checked_mode(n, k, ell, mode);
    const int nu = n / ell;
    PartitionScheme s;
    s.id = instance_id;
    s.mode = mode;
    s.n = n;
    s.k = k;
    s.ell = ell;

    std::vector<Vertex> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    Rng rng(derive_seed(seed, streams::kScheme, static_cast<std::uint64_t>(instance_id)));
    rng.shuffle(perm);

    int x_size, y_size;
    switch (mode) {
        case PartitionMode::BipartitionCycle:
            x_size = k - ell;
            y_size = 2 * ell - k;
            break;
        case PartitionMode::Matching:
            x_size = k / 2;
            y_size = k - k / 2;
            break;
        case PartitionMode::FullPartition:
        default:
            x_size = ell;
            y_size = 0;
            break;
    }

    std::size_t pos = 0;
    s.x_blocks.resize(static_cast<std::size_t>(nu));
    for (auto& blk : s.x_blocks) {
        blk.assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                   perm.begin() + static_cast<std::ptrdiff_t>(pos + static_cast<std::size_t>(x_size)));
        std::sort(blk.begin(), blk.end());
        pos += static_cast<std::size_t>(x_size);
    }
    if (y_size > 0) {
        s.y_blocks.resize(static_cast<std::size_t>(nu));
        for (auto& blk : s.y_blocks) {
            blk.assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                       perm.begin() + static_cast<std::ptrdiff_t>(pos + static_cast<std::size_t>(y_size)));
            std::sort(blk.begin(), blk.end());
            pos += static_cast<std::size_t>(y_size);
        }
    }
    require_invariant(pos == static_cast<std::size_t>(n), "sample_scheme: blocks must cover [n]");
    s.build_index();
    return s;
}

/// All block-pair witnesses under which the scheme includes E. The block
/// sizes force at most one witness per scheme (asserted).
inline std::vector<InclusionWitness> edge_inclusions(const PartitionScheme& s,
                                                     std::span<const Vertex> e) {
    if (static_cast<int>(e.size()) != s.k) throw InvalidInput("edge_inclusions: |E| != k");
    const int nu = s.nu();

    // Classify E's vertices; every touched block must end up fully covered.
    std::int32_t xb[2] = {-1, -1};
    std::int32_t yb = -1;
    int x_blocks_touched = 0, y_blocks_touched = 0;
    int x_cover = 0, y_cover = 0;
    for (Vertex v : e) {
        if (v < 1 || v > s.n) throw InvalidInput("edge_inclusions: vertex out of range");
        std::int8_t side = s.side_of[static_cast<std::size_t>(v)];
        std::int32_t blk = s.block_of[static_cast<std::size_t>(v)];
        if (side == 0) {
            if (xb[0] != blk && xb[1] != blk) {
                if (x_blocks_touched == 2) return {};
                xb[x_blocks_touched++] = blk;
            }
            ++x_cover;
        } else {
            if (yb != blk) {
                if (y_blocks_touched == 1) return {};
                yb = blk;
                ++y_blocks_touched;
            }
            ++y_cover;
        }
    }

    auto x_block_size = [&](std::int32_t b) { return static_cast<int>(s.x_blocks[static_cast<std::size_t>(b)].size()); };

    std::vector<InclusionWitness> out;
    switch (s.mode) {
        case PartitionMode::BipartitionCycle: {
            if (x_blocks_touched != 2 || y_blocks_touched != 1) return {};
            if (x_cover != x_block_size(xb[0]) + x_block_size(xb[1])) return {};
            if (y_cover != static_cast<int>(s.y_blocks[static_cast<std::size_t>(yb)].size())) return {};
            // Cyclically adjacent X blocks: a, a+1 with nu+1 == 1.
            std::int32_t u = xb[0], w = xb[1];
            if ((u + 1) % nu == w) out.push_back({u + 1, yb + 1});
            else if ((w + 1) % nu == u) out.push_back({w + 1, yb + 1});
            break;
        }
        case PartitionMode::Matching: {
            if (x_blocks_touched != 1 || y_blocks_touched != 1) return {};
            if (x_cover != x_block_size(xb[0])) return {};
            if (y_cover != static_cast<int>(s.y_blocks[static_cast<std::size_t>(yb)].size())) return {};
            out.push_back({xb[0] + 1, yb + 1});
            break;
        }
        case PartitionMode::FullPartition: {
            if (x_blocks_touched != 2 || y_blocks_touched != 0) return {};
            if (x_cover != x_block_size(xb[0]) + x_block_size(xb[1])) return {};
            std::int32_t u = std::min(xb[0], xb[1]), w = std::max(xb[0], xb[1]);
            out.push_back({u + 1, w + 1});
            break;
        }
    }
    require_invariant(out.size() <= 1, "edge_inclusions: multiple witnesses in one scheme");
    return out;
}

/// Per-edge inclusion counts f(E) and the uniformly chosen label, over the
/// edges of H. Unlabeled edges carry label 0.
struct LabeledEdgeSet {
    std::vector<std::uint32_t> f;            // per edge index of H
    std::vector<std::int64_t> label;         // scheme id, 0 = unlabeled
    std::vector<InclusionWitness> witness;   // valid where label != 0
    std::size_t unlabeled_count = 0;
};

/// f(E) aggregation plus random labeling. The label of each edge is drawn
/// from a substream keyed by the edge's canonical rank, over the including
/// instances sorted by id, so the result does not depend on the order of
/// `schemes`.
inline LabeledEdgeSet label_edges(const Hypergraph& h,
                                  const std::vector<PartitionScheme>& schemes,
                                  std::uint64_t seed) {
    std::vector<const PartitionScheme*> order;
    order.reserve(schemes.size());
    for (const auto& s : schemes) {
        if (s.n != h.n() || s.k != h.k())
            throw InvalidInput("label_edges: scheme shape does not match hypergraph");
        if (!schemes.empty() && (s.ell != schemes.front().ell || s.mode != schemes.front().mode))
            throw InvalidInput("label_edges: schemes must share (n, k, ell, mode)");
        order.push_back(&s);
    }
    std::sort(order.begin(), order.end(),
              [](const PartitionScheme* a, const PartitionScheme* b) { return a->id < b->id; });
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
        if (order[i]->id == order[i + 1]->id) throw InvalidInput("label_edges: duplicate instance id");

    LabeledEdgeSet out;
    out.f.assign(h.m(), 0);
    out.label.assign(h.m(), 0);
    out.witness.assign(h.m(), {});

    std::vector<std::pair<std::int64_t, InclusionWitness>> incl;
    for (std::size_t e = 0; e < h.m(); ++e) {
        incl.clear();
        auto edge = h.edge(e);
        for (const PartitionScheme* s : order) {
            auto ws = edge_inclusions(*s, edge);
            if (!ws.empty()) incl.push_back({s->id, ws.front()});
        }
        out.f[e] = static_cast<std::uint32_t>(incl.size());
        if (incl.empty()) {
            ++out.unlabeled_count;
            continue;
        }
        Rng rng(derive_seed(seed, streams::kLabel, h.rank_of(edge)));
        auto pick = incl[static_cast<std::size_t>(rng.below(incl.size()))];
        out.label[e] = pick.first;
        out.witness[e] = pick.second;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parameter formulas
// ---------------------------------------------------------------------------

struct ParameterOverrides {
    std::optional<double> r;
    std::optional<double> eps;
    std::optional<double> f0;
};

/// The scheme parameters of one run. All logarithms are natural. The
/// theorem-scale defaults are reported even when overridden; values outside
/// their sane ranges are flagged in `diagnostics` rather than rejected.
struct SchemeParameters {
    int n = 0, k = 0, ell = 0;
    double p = 0.0;
    PartitionMode mode = PartitionMode::BipartitionCycle;
    double rho = 0.0;           // per-instance inclusion probability
    double r_theoretical = 0.0; // n^{k-2} (np)^{1/2}
    std::int64_t r = 0;         // instance count actually used
    double eps = 0.0;
    double f0 = 0.0;            // label-count cap
    double p0 = 0.0;            // p / f0
    double n0 = 0.0;            // (1 - eps) nu p0
    // Pseudo-random-flavor quantities, for reporting.
    double f0_window_lo = 0.0, f0_window_hi = 0.0;
    double f0_pseudo = 0.0;
    double r_pseudo = 0.0;
    double n0_pseudo = 0.0;
    std::vector<std::string> diagnostics;

    bool operator==(const SchemeParameters&) const = default;
};

inline SchemeParameters scheme_parameters(int n, int k, int ell, double p, PartitionMode mode,
                                          const ParameterOverrides& ov = {}) {
    detail::checked_mode(n, k, ell, mode);
    if (p < 0.0 || p > 1.0) throw InvalidInput("scheme_parameters: p must be in [0,1]");

    SchemeParameters sp;
    sp.n = n;
    sp.k = k;
    sp.ell = ell;
    sp.p = p;
    sp.mode = mode;

    const double nu = static_cast<double>(n) / ell;
    const double cnk = binom_d(n, k);
    sp.rho = (mode == PartitionMode::FullPartition) ? nu * (nu - 1) / 2.0 / cnk : nu * nu / cnk;
    if (!(sp.rho > 0.0 && sp.rho <= 1.0)) sp.diagnostics.push_back("rho outside (0,1]");

    const double ln_n = std::log(static_cast<double>(n));
    const double np = static_cast<double>(n) * p;

    sp.r_theoretical = std::pow(static_cast<double>(n), k - 2) * std::sqrt(np);
    double r_used = ov.r ? *ov.r : sp.r_theoretical;
    if (!(r_used >= 1.0)) {
        sp.diagnostics.push_back("r < 1, clamped");
        r_used = 1.0;
    }
    if (r_used > 4e18) throw InvalidInput("scheme_parameters: r too large for an instance count");
    sp.r = static_cast<std::int64_t>(std::llround(r_used));

    const bool k3_case = (mode == PartitionMode::BipartitionCycle && k == 3);
    if (ov.eps) {
        sp.eps = *ov.eps;
    } else if (k3_case) {
        sp.eps = std::sqrt(72.0 * n * ln_n / static_cast<double>(sp.r));
    } else if (mode == PartitionMode::Matching) {
        sp.eps = 10.0 * factorial_d(k) *
                 std::sqrt(4.0 * (k + 3) * factorial_d(k) * ln_n / (ell * std::sqrt(np)));
    } else {
        sp.eps = std::sqrt(4.0 * (k + 3) * factorial_d(k) * ln_n / (ell * std::sqrt(np)));
    }
    if (sp.eps >= 1.0) sp.diagnostics.push_back("eps >= 1 at this scale");

    const double rrho = static_cast<double>(sp.r) * sp.rho;
    if (ov.f0) {
        sp.f0 = *ov.f0;
    } else if (k3_case) {
        sp.f0 = rrho + std::sqrt(12.0 * rrho * ln_n);
    } else {
        sp.f0 = rrho + std::sqrt(4.0 * k * rrho * ln_n);
    }
    if (sp.f0 < 1.0) sp.diagnostics.push_back("f0 < 1 (p0 exceeds p)");

    sp.p0 = sp.f0 > 0.0 ? p / sp.f0 : p;
    sp.n0 = (1.0 - sp.eps) * nu * sp.p0;
    if (sp.n0 < 1.0) sp.diagnostics.push_back("n0 < 1 at this scale");

    // f0 window for the pseudo-random flavor, and the matching r.
    if (mode == PartitionMode::FullPartition) {
        sp.f0_window_lo = ln_n / (sp.eps * sp.eps);
        sp.f0_window_hi =
            std::min(sp.eps * sp.eps * np / ln_n, sp.eps * sp.eps * sp.eps * np / ln_n);
    } else {
        sp.f0_window_lo = ln_n / (sp.eps * sp.eps);
        sp.f0_window_hi = std::sqrt(sp.eps * std::sqrt(static_cast<double>(n)) * p * p / ln_n);
    }
    if (sp.f0_window_lo < sp.f0_window_hi) {
        sp.f0_pseudo = std::sqrt(sp.f0_window_lo * sp.f0_window_hi);
    } else {
        sp.f0_pseudo = sp.f0_window_lo;
        sp.diagnostics.push_back("empty f0 window at this (n, p, eps)");
    }
    const double pseudo_factor = (mode == PartitionMode::FullPartition) ? (2.0 - sp.eps) : (1.0 - sp.eps);
    sp.r_pseudo = pseudo_factor * cnk * sp.f0_pseudo / (nu * nu);
    const double p0_pseudo = sp.f0_pseudo > 0.0 ? p / sp.f0_pseudo : p;
    switch (mode) {
        case PartitionMode::BipartitionCycle:
            sp.n0_pseudo = (1.0 - std::cbrt(5.0 * sp.eps)) * nu * p0_pseudo;
            break;
        case PartitionMode::Matching:
            sp.n0_pseudo = (1.0 - 2.0 * std::cbrt(sp.eps)) * nu * p0_pseudo;
            break;
        case PartitionMode::FullPartition:
            sp.n0_pseudo = ((1.0 - 2.0 * sp.eps) / 2.0 - 8.0 * sp.eps) * nu * p0_pseudo;
            break;
    }
    return sp;
}

} // namespace hampack
