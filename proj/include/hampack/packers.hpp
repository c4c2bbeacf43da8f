#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "hampack/errors.hpp"
#include "hampack/graphs.hpp"
#include "hampack/rng.hpp"

namespace hampack {

namespace detail {

/// Dinic max-flow on small integer networks.
class Dinic {
public:
    explicit Dinic(int nodes) : head_(static_cast<std::size_t>(nodes), -1) {}

    void add_edge(int from, int to, int cap) {
        edges_.push_back({to, head_[static_cast<std::size_t>(from)], cap});
        head_[static_cast<std::size_t>(from)] = static_cast<int>(edges_.size()) - 1;
        edges_.push_back({from, head_[static_cast<std::size_t>(to)], 0});
        head_[static_cast<std::size_t>(to)] = static_cast<int>(edges_.size()) - 1;
    }

    long long max_flow(int s, int t) {
        long long flow = 0;
        while (bfs(s, t)) {
            iter_ = head_;
            long long f;
            while ((f = dfs(s, t, 1LL << 60)) > 0) flow += f;
        }
        return flow;
    }

    /// Residual flow on forward edge i (edges are added in pairs).
    int flow_on(int i) const { return edges_[static_cast<std::size_t>(2 * i + 1)].cap; }

    /// Nodes reachable from s in the residual network (the min-cut source side).
    std::vector<bool> reachable(int s) const {
        std::vector<bool> vis(head_.size(), false);
        std::vector<int> stack{s};
        vis[static_cast<std::size_t>(s)] = true;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int e = head_[static_cast<std::size_t>(u)]; e != -1; e = edges_[static_cast<std::size_t>(e)].next) {
                const auto& ed = edges_[static_cast<std::size_t>(e)];
                if (ed.cap > 0 && !vis[static_cast<std::size_t>(ed.to)]) {
                    vis[static_cast<std::size_t>(ed.to)] = true;
                    stack.push_back(ed.to);
                }
            }
        }
        return vis;
    }

private:
    struct E {
        int to, next, cap;
    };

    bool bfs(int s, int t) {
        level_.assign(head_.size(), -1);
        std::queue<int> q;
        q.push(s);
        level_[static_cast<std::size_t>(s)] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int e = head_[static_cast<std::size_t>(u)]; e != -1; e = edges_[static_cast<std::size_t>(e)].next) {
                const auto& ed = edges_[static_cast<std::size_t>(e)];
                if (ed.cap > 0 && level_[static_cast<std::size_t>(ed.to)] < 0) {
                    level_[static_cast<std::size_t>(ed.to)] = level_[static_cast<std::size_t>(u)] + 1;
                    q.push(ed.to);
                }
            }
        }
        return level_[static_cast<std::size_t>(t)] >= 0;
    }

    long long dfs(int u, int t, long long lim) {
        if (u == t) return lim;
        for (int& e = iter_[static_cast<std::size_t>(u)]; e != -1; e = edges_[static_cast<std::size_t>(e)].next) {
            auto& ed = edges_[static_cast<std::size_t>(e)];
            if (ed.cap > 0 && level_[static_cast<std::size_t>(ed.to)] == level_[static_cast<std::size_t>(u)] + 1) {
                long long f = dfs(ed.to, t, std::min(lim, static_cast<long long>(ed.cap)));
                if (f > 0) {
                    ed.cap -= static_cast<int>(f);
                    edges_[static_cast<std::size_t>(e ^ 1)].cap += static_cast<int>(f);
                    return f;
                }
            }
        }
        return 0;
    }

    std::vector<E> edges_;
    std::vector<int> head_;
    std::vector<int> level_;
    std::vector<int> iter_;
};

} // namespace detail

/// A set-pair cut of the perfect-matching network: with s = |S|, t' = |T|,
/// feasibility of n_0 disjoint matchings requires e(S, B \ T) >= (s - t') n_0.
struct CutCertificate {
    std::vector<std::int32_t> s; // subset of A, 1-based
    std::vector<std::int32_t> t; // subset of B, 1-based
};

struct FlowResult {
    int t = 0;                // max number of edge-disjoint perfect matchings
    BipartiteGraph subgraph;  // t-regular spanning subgraph carrying the flow
    CutCertificate cut;       // violates the condition at n_0 = t + 1
};

namespace detail {

/// Builds the matching network at parameter n0 and runs max flow.
/// Node ids: 0 = source, 1..N = A, N+1..2N = B, 2N+1 = sink.
struct PmFlowRun {
    detail::Dinic dinic;
    long long flow;
    std::vector<int> edge_ids; // Dinic pair index per input graph edge

    PmFlowRun(const BipartiteGraph& g, int n0) : dinic(2 * g.n + 2), flow(0) {
        const int n = g.n;
        for (int a = 1; a <= n; ++a) dinic.add_edge(0, a, n0);
        edge_ids.reserve(g.edges.size());
        for (auto [a, b] : g.edges) {
            edge_ids.push_back(static_cast<int>(edge_ids.size()) + n);
            dinic.add_edge(a, n + b, 1);
        }
        for (int b = 1; b <= n; ++b) dinic.add_edge(n + b, 2 * n + 1, n0);
        flow = dinic.max_flow(0, 2 * n + 1);
    }

    bool feasible(const BipartiteGraph& g, int n0) const {
        return flow == static_cast<long long>(n0) * g.n;
    }
};

} // namespace detail

/// Largest t such that the matching network carries flow tN, with the
/// t-regular spanning subgraph and a certifying cut for t + 1.
inline FlowResult max_disjoint_pm_flow(const BipartiteGraph& g) {
    if (g.n <= 0) throw InvalidInput("max_disjoint_pm_flow: empty graph");
    FlowResult out;
    out.subgraph.n = g.n;

    int lo = 0, hi = g.min_degree();
    while (lo < hi) {
        int mid = (lo + hi + 1) / 2;
        detail::PmFlowRun run(g, mid);
        if (run.feasible(g, mid)) lo = mid; else hi = mid - 1;
    }
    out.t = lo;

    if (out.t > 0) {
        detail::PmFlowRun run(g, out.t);
        require_invariant(run.feasible(g, out.t), "pm flow: optimum not feasible on re-run");
        for (std::size_t i = 0; i < g.edges.size(); ++i)
            if (run.dinic.flow_on(run.edge_ids[i]) == 1) out.subgraph.edges.push_back(g.edges[i]);
    }

    // Certificate: the min cut of the infeasible t+1 network.
    detail::PmFlowRun over(g, out.t + 1);
    require_invariant(!over.feasible(g, out.t + 1), "pm flow: t+1 unexpectedly feasible");
    auto reach = over.dinic.reachable(0);
    for (int a = 1; a <= g.n; ++a)
        if (reach[static_cast<std::size_t>(a)]) out.cut.s.push_back(a);
    for (int b = 1; b <= g.n; ++b)
        if (reach[static_cast<std::size_t>(g.n + b)]) out.cut.t.push_back(b);
    return out;
}

/// Edge-disjoint perfect matchings; matchings[j][a-1] = b.
struct MatchingPack {
    std::vector<std::vector<std::int32_t>> matchings;
    int count() const { return static_cast<int>(matchings.size()); }
};

namespace detail {

/// Hopcroft-Karp on adjacency lists; returns the matching size.
inline int hopcroft_karp(const std::vector<std::vector<std::int32_t>>& adj, int n,
                         std::vector<std::int32_t>& match_a, std::vector<std::int32_t>& match_b) {
    constexpr std::int32_t kInf = INT32_MAX;
    match_a.assign(static_cast<std::size_t>(n) + 1, 0);
    match_b.assign(static_cast<std::size_t>(n) + 1, 0);
    // Greedy seed.
    int matched = 0;
    for (int a = 1; a <= n; ++a)
        for (std::int32_t b : adj[static_cast<std::size_t>(a)])
            if (match_b[static_cast<std::size_t>(b)] == 0) {
                match_a[static_cast<std::size_t>(a)] = b;
                match_b[static_cast<std::size_t>(b)] = a;
                ++matched;
                break;
            }

    std::vector<std::int32_t> dist(static_cast<std::size_t>(n) + 1);
    std::vector<std::int32_t> q(static_cast<std::size_t>(n));
    auto bfs = [&]() -> bool {
        int head = 0, tail = 0;
        std::int32_t reached_free = kInf;
        for (int a = 1; a <= n; ++a) {
            if (match_a[static_cast<std::size_t>(a)] == 0) {
                dist[static_cast<std::size_t>(a)] = 0;
                q[static_cast<std::size_t>(tail++)] = a;
            } else {
                dist[static_cast<std::size_t>(a)] = kInf;
            }
        }
        while (head < tail) {
            int a = q[static_cast<std::size_t>(head++)];
            if (dist[static_cast<std::size_t>(a)] >= reached_free) continue;
            for (std::int32_t b : adj[static_cast<std::size_t>(a)]) {
                std::int32_t a2 = match_b[static_cast<std::size_t>(b)];
                if (a2 == 0) {
                    reached_free = std::min(reached_free, dist[static_cast<std::size_t>(a)] + 1);
                } else if (dist[static_cast<std::size_t>(a2)] == kInf) {
                    dist[static_cast<std::size_t>(a2)] = dist[static_cast<std::size_t>(a)] + 1;
                    q[static_cast<std::size_t>(tail++)] = a2;
                }
            }
        }
        return reached_free != kInf;
    };
    auto dfs = [&](auto&& self, int a) -> bool {
        for (std::int32_t b : adj[static_cast<std::size_t>(a)]) {
            std::int32_t a2 = match_b[static_cast<std::size_t>(b)];
            if (a2 == 0 ||
                (dist[static_cast<std::size_t>(a2)] == dist[static_cast<std::size_t>(a)] + 1 && self(self, a2))) {
                match_a[static_cast<std::size_t>(a)] = b;
                match_b[static_cast<std::size_t>(b)] = a;
                return true;
            }
        }
        dist[static_cast<std::size_t>(a)] = kInf;
        return false;
    };
    while (bfs())
        for (int a = 1; a <= n; ++a)
            if (match_a[static_cast<std::size_t>(a)] == 0 && dfs(dfs, a)) ++matched;
    return matched;
}

} // namespace detail

/// Flow-optimal packing: computes t, then peels the t-regular subgraph into
/// exactly t perfect matchings; every peel is asserted perfect.
inline MatchingPack pack_perfect_matchings(const BipartiteGraph& g) {
    FlowResult flow = max_disjoint_pm_flow(g);
    MatchingPack pack;
    if (flow.t == 0) return pack;

    const int n = g.n;
    auto adj = flow.subgraph.adjacency_left();
    std::vector<std::int32_t> match_a, match_b;
    for (int peel = 0; peel < flow.t; ++peel) {
        int size = detail::hopcroft_karp(adj, n, match_a, match_b);
        require_invariant(size == n, "pack_perfect_matchings: peel is not perfect");
        std::vector<std::int32_t> phi(static_cast<std::size_t>(n));
        for (int a = 1; a <= n; ++a) {
            std::int32_t b = match_a[static_cast<std::size_t>(a)];
            phi[static_cast<std::size_t>(a - 1)] = b;
            auto& lst = adj[static_cast<std::size_t>(a)];
            lst.erase(std::find(lst.begin(), lst.end(), b));
        }
        pack.matchings.push_back(std::move(phi));
    }
    for (const auto& lst : adj)
        require_invariant(lst.empty(), "pack_perfect_matchings: leftover edges after peeling");
    return pack;
}

/// Exhaustive maximum number of edge-disjoint perfect matchings, N <= 7.
/// Test oracle: enumerates matching sequences with the partner of vertex 1
/// strictly increasing across the sequence, pruning on remaining min degree.
inline int brute_force_pm_oracle(const BipartiteGraph& g) {
    if (g.n > 7) throw InvalidInput("brute_force_pm_oracle: N must be <= 7");
    if (g.n <= 0) throw InvalidInput("brute_force_pm_oracle: empty graph");
    const int n = g.n;
    std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
    for (auto [a, b] : g.edges) adj[static_cast<std::size_t>(a - 1)] |= 1u << (b - 1);

    int best = 0;
    auto min_degree = [&](const std::vector<std::uint32_t>& m) {
        int d = n;
        for (int a = 0; a < n; ++a) d = std::min(d, std::popcount(m[static_cast<std::size_t>(a)]));
        for (int b = 0; b < n; ++b) {
            int db = 0;
            for (int a = 0; a < n; ++a) db += (m[static_cast<std::size_t>(a)] >> b) & 1u;
            d = std::min(d, db);
        }
        return d;
    };

    auto search = [&](auto&& self, std::vector<std::uint32_t>& m, int depth, int phi1_floor) -> void {
        best = std::max(best, depth);
        if (depth + min_degree(m) <= best) return;
        // Enumerate perfect matchings with phi(1) > phi1_floor. Each level
        // owns its assignment buffer; deeper levels must not clobber it.
        std::vector<std::int32_t> assign(static_cast<std::size_t>(n), 0);
        auto enumerate = [&](auto&& en, int a, std::uint32_t used) -> void {
            if (depth + min_degree(m) <= best) return;
            if (a == n) {
                std::vector<std::uint32_t> next = m;
                for (int i = 0; i < n; ++i)
                    next[static_cast<std::size_t>(i)] &= ~(1u << (assign[static_cast<std::size_t>(i)]));
                self(self, next, depth + 1, assign[0]);
                return;
            }
            std::uint32_t cands = m[static_cast<std::size_t>(a)] & ~used;
            if (a == 0) cands &= ~((1u << (phi1_floor + 1)) - 1u);
            while (cands) {
                int b = std::countr_zero(cands);
                cands &= cands - 1;
                assign[static_cast<std::size_t>(a)] = b;
                en(en, a + 1, used | (1u << b));
            }
        };
        enumerate(enumerate, 0, 0u);
    };
    search(search, adj, 0, -1);
    return best;
}

// ---------------------------------------------------------------------------
// Hamilton cycle packing via rotation-extension
// ---------------------------------------------------------------------------

struct HamiltonParams {
    int restart_budget = 50;    // attempts per cycle
    int rotation_factor = 10;   // rotation cap = factor * N per attempt
    int failure_stop = 3;       // stop after this many consecutive failed cycles
};

struct CyclePack {
    std::vector<std::vector<std::int32_t>> cycles; // vertex sequences, 1-based
    int count() const { return static_cast<int>(cycles.size()); }
};

namespace detail {

class Bitset {
public:
    explicit Bitset(int n) : words_((static_cast<std::size_t>(n) + 64) / 64, 0) {}
    void set(int i) { words_[static_cast<std::size_t>(i) >> 6] |= 1ULL << (i & 63); }
    void clear(int i) { words_[static_cast<std::size_t>(i) >> 6] &= ~(1ULL << (i & 63)); }
    bool test(int i) const { return (words_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u; }
    void reset() { std::fill(words_.begin(), words_.end(), 0); }
    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    std::vector<std::uint64_t> words_;
};

/// Random member of (a AND NOT mask), or 0 if empty.
inline int random_bit_and_not(const std::vector<std::uint64_t>& a, const Bitset& mask, Rng& rng) {
    int total = 0;
    for (std::size_t w = 0; w < a.size(); ++w)
        total += std::popcount(a[w] & ~mask.words()[w]);
    if (total == 0) return 0;
    int idx = static_cast<int>(rng.below(static_cast<std::uint64_t>(total)));
    for (std::size_t w = 0; w < a.size(); ++w) {
        std::uint64_t word = a[w] & ~mask.words()[w];
        int c = std::popcount(word);
        if (idx < c) {
            for (int j = 0; j < idx; ++j) word &= word - 1;
            return static_cast<int>(w) * 64 + std::countr_zero(word);
        }
        idx -= c;
    }
    return 0;
}

} // namespace detail

/// Repeatedly extracts Hamilton cycles by rotation-extension (longest-path
/// growth with endpoint rotations), removing each found cycle's edges, until
/// `failure_stop` consecutive cycles fail or `target_hint` is reached
/// (0 = unbounded). Deterministic for fixed seed.
inline CyclePack pack_graph_hamilton(const SimpleGraph& g, int target_hint = 0,
                                     std::uint64_t seed = 0, const HamiltonParams& params = {}) {
    const int n = g.n;
    CyclePack pack;
    if (n < 3) throw InvalidInput("pack_graph_hamilton: need at least 3 vertices");

    std::vector<std::vector<std::uint64_t>> adj(static_cast<std::size_t>(n) + 1,
                                                std::vector<std::uint64_t>((static_cast<std::size_t>(n) + 64) / 64, 0));
    std::vector<int> deg(static_cast<std::size_t>(n) + 1, 0);
    auto add = [&](int u, int v) {
        adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v) >> 6] |= 1ULL << (v & 63);
    };
    auto remove = [&](int u, int v) {
        adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v) >> 6] &= ~(1ULL << (v & 63));
    };
    auto has = [&](int u, int v) {
        return (adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1u;
    };
    for (auto [u, v] : g.edges) {
        add(u, v);
        add(v, u);
        ++deg[static_cast<std::size_t>(u)];
        ++deg[static_cast<std::size_t>(v)];
    }

    Rng rng(derive_seed(seed, streams::kHamilton));
    const int rotation_cap = params.rotation_factor * n;

    std::vector<std::int32_t> path;
    std::vector<std::int32_t> pos(static_cast<std::size_t>(n) + 1, -1);
    detail::Bitset in_path(n + 1);

    auto reverse_tail = [&](int from) {
        // Reverse path[from..end], keeping pos in sync.
        int lo = from, hi = static_cast<int>(path.size()) - 1;
        while (lo < hi) {
            std::swap(path[static_cast<std::size_t>(lo)], path[static_cast<std::size_t>(hi)]);
            pos[static_cast<std::size_t>(path[static_cast<std::size_t>(lo)])] = lo;
            pos[static_cast<std::size_t>(path[static_cast<std::size_t>(hi)])] = hi;
            ++lo;
            --hi;
        }
    };

    auto attempt = [&]() -> std::optional<std::vector<std::int32_t>> {
        path.clear();
        in_path.reset();
        int start = static_cast<int>(rng.below(static_cast<std::uint64_t>(n))) + 1;
        path.push_back(start);
        pos[static_cast<std::size_t>(start)] = 0;
        in_path.set(start);

        int rotations = 0;
        while (rotations < rotation_cap) {
            int u = path.back();
            if (static_cast<int>(path.size()) < n) {
                int v = detail::random_bit_and_not(adj[static_cast<std::size_t>(u)], in_path, rng);
                if (v != 0) {
                    pos[static_cast<std::size_t>(v)] = static_cast<int>(path.size());
                    path.push_back(v);
                    in_path.set(v);
                    continue;
                }
            } else {
                // Spanning path; close directly or through a crossing chord.
                if (has(u, path.front())) return path;
                const auto& nb = adj[static_cast<std::size_t>(u)];
                for (std::size_t w = 0; w < nb.size(); ++w) {
                    std::uint64_t word = nb[w];
                    while (word) {
                        int x = static_cast<int>(w) * 64 + std::countr_zero(word);
                        word &= word - 1;
                        int i = pos[static_cast<std::size_t>(x)];
                        if (i + 1 < static_cast<int>(path.size()) &&
                            has(path.front(), path[static_cast<std::size_t>(i + 1)])) {
                            reverse_tail(i + 1);
                            return path;
                        }
                    }
                }
            }
            // Rotate: new endpoint path[i+1] for a random in-path neighbor path[i].
            detail::Bitset not_allowed(n + 1);
            not_allowed.set(u);
            if (path.size() >= 2) not_allowed.set(path[path.size() - 2]);
            // Only in-path neighbors rotate; mask out the outside.
            std::vector<std::uint64_t> in_nb(adj[static_cast<std::size_t>(u)].size());
            for (std::size_t w = 0; w < in_nb.size(); ++w)
                in_nb[w] = adj[static_cast<std::size_t>(u)][w] & in_path.words()[w];
            int wv = detail::random_bit_and_not(in_nb, not_allowed, rng);
            if (wv == 0) return std::nullopt;
            reverse_tail(pos[static_cast<std::size_t>(wv)] + 1);
            ++rotations;
        }
        return std::nullopt;
    };

    int consecutive_failures = 0;
    while (consecutive_failures < params.failure_stop) {
        if (target_hint > 0 && pack.count() >= target_hint) break;
        int dmin = n;
        for (int v = 1; v <= n; ++v) dmin = std::min(dmin, deg[static_cast<std::size_t>(v)]);
        if (dmin < 2) break; // no further Hamilton cycle can exist

        std::optional<std::vector<std::int32_t>> found;
        for (int tries = 0; tries < params.restart_budget && !found; ++tries) found = attempt();
        if (!found) {
            ++consecutive_failures;
            continue;
        }
        consecutive_failures = 0;
        const auto& cyc = *found;
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            int u = cyc[i];
            int v = cyc[(i + 1) % cyc.size()];
            remove(u, v);
            remove(v, u);
            --deg[static_cast<std::size_t>(u)];
            --deg[static_cast<std::size_t>(v)];
        }
        pack.cycles.push_back(cyc);
    }
    return pack;
}

} // namespace hampack
