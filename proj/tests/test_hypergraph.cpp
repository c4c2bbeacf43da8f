#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hampack/hypergraph.hpp"

using namespace hampack;

TEST_CASE("generate_hnpk boundary probabilities") {
    auto empty = generate_hnpk(10, 3, 0.0, 1);
    CHECK(empty.m() == 0);
    CHECK(empty.density() == 0.0);

    auto complete = generate_hnpk(6, 3, 1.0, 1);
    CHECK(complete.m() == 20); // C(6,3)
    CHECK(complete.density() == 1.0);
}

TEST_CASE("generate_hnpk rejects bad parameters") {
    CHECK_THROWS_AS(generate_hnpk(3, 4, 0.5, 1), InvalidInput);
    CHECK_THROWS_AS(generate_hnpk(10, 3, -0.1, 1), InvalidInput);
    CHECK_THROWS_AS(generate_hnpk(10, 3, 1.5, 1), InvalidInput);
}

TEST_CASE("generate_hnpk edge-count moments over a seed sweep") {
    // m ~ Bin(C(10,3), 0.5): mean 60, sigma = sqrt(120 * 0.25) ~ 5.48.
    const int runs = 200;
    double total = 0;
    for (int s = 0; s < runs; ++s) total += static_cast<double>(generate_hnpk(10, 3, 0.5, 1000 + s).m());
    double mean = total / runs;
    const double sigma = std::sqrt(120.0 * 0.25);
    CHECK(std::abs(mean - 60.0) <= 4.0 * sigma);
    // The mean of 200 runs concentrates much harder; keep the sharp check too.
    CHECK(std::abs(mean - 60.0) <= 4.0 * sigma / std::sqrt(static_cast<double>(runs)));
}

TEST_CASE("generate_hnpk determinism") {
    auto a = generate_hnpk(12, 3, 0.4, 77);
    auto b = generate_hnpk(12, 3, 0.4, 77);
    REQUIRE(a.m() == b.m());
    for (std::size_t i = 0; i < a.m(); ++i) {
        auto ea = a.edge(i);
        auto eb = b.edge(i);
        CHECK(std::equal(ea.begin(), ea.end(), eb.begin(), eb.end()));
    }
    auto c = generate_hnpk(12, 3, 0.4, 78);
    bool differs = c.m() != a.m();
    if (!differs)
        for (std::size_t i = 0; i < a.m() && !differs; ++i) {
            auto ea = a.edge(i);
            auto ec = c.edge(i);
            differs = !std::equal(ea.begin(), ea.end(), ec.begin(), ec.end());
        }
    CHECK(differs);
}

TEST_CASE("canonicalization is idempotent over vertex order") {
    Hypergraph h(6, 3, {{3, 1, 2}, {1, 2, 3}, {2, 3, 1}});
    CHECK(h.m() == 1);
    CHECK(h.contains(Edge{1, 2, 3}));
    CHECK(h.contains_any_order(Edge{3, 2, 1}));
    CHECK_FALSE(h.contains(Edge{1, 2, 4}));
}

TEST_CASE("neighborhood queries") {
    // Complete K_5^3.
    auto k5 = generate_hnpk(5, 3, 1.0, 0);
    auto res = neighborhood_query(k5, VertexSet::of({1, 2}));
    CHECK(res.degree == 3);
    CHECK(res.neighborhood == std::vector<Edge>{{3}, {4}, {5}});

    Hypergraph h(5, 3, {{1, 2, 3}, {1, 2, 4}});
    auto r2 = neighborhood_query(h, VertexSet::of({1, 2}));
    CHECK(r2.degree == 2);
    CHECK(r2.neighborhood == std::vector<Edge>{{3}, {4}});

    auto r3 = neighborhood_query(h, VertexSet::of({3, 4}));
    CHECK(r3.degree == 0);
    CHECK(r3.neighborhood.empty());

    CHECK_THROWS_AS(neighborhood_query(h, VertexSet::of({1, 2, 3})), InvalidInput);
    CHECK_THROWS_AS(neighborhood_query(h, VertexSet::of({})), InvalidInput);
}

TEST_CASE("degree consistency: sum of d_H(S) over |S|=a equals C(k,a) m") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto h = generate_hnpk(12, 4, 0.3, seed);
        for (int a = 1; a < 4; ++a) {
            std::uint64_t sum = 0;
            for_each_combination(12, a, [&](const std::vector<Vertex>& s) {
                sum += h.degree(VertexSet::of(s));
            });
            CHECK(sum == binom_u64(4, a) * h.m());
        }
    }
}

TEST_CASE("density accessor is exactly m / C(n,k)") {
    auto h = generate_hnpk(9, 3, 0.35, 5);
    CHECK(h.density() == static_cast<double>(h.m()) / static_cast<double>(binom_u64(9, 3)));
    CHECK(std::llround(h.density() * static_cast<double>(h.total_ksets())) ==
          static_cast<long long>(h.m()));
}

TEST_CASE("parse_hypergraph accepts the documented format") {
    std::istringstream in("# comment\n3 6\n1 2 3\n3 4 5\n# another\n5 6 1\n");
    auto h = parse_hypergraph(in);
    CHECK(h.n() == 6);
    CHECK(h.k() == 3);
    CHECK(h.m() == 3);
    CHECK(h.contains(Edge{1, 5, 6}));
}

TEST_CASE("parse_hypergraph rejects malformed input with line numbers") {
    std::istringstream arity("3 6\n1 2\n");
    CHECK_THROWS_WITH_AS(parse_hypergraph(arity), doctest::Contains("line 2"), InvalidInput);

    std::istringstream range("3 6\n1 2 9\n");
    CHECK_THROWS_WITH_AS(parse_hypergraph(range), doctest::Contains("range"), InvalidInput);

    std::istringstream dup("3 6\n1 2 3\n1 2 3\n");
    CHECK_THROWS_WITH_AS(parse_hypergraph(dup), doctest::Contains("duplicate"), InvalidInput);

    std::istringstream repeated("3 6\n2 2 3\n");
    CHECK_THROWS_WITH_AS(parse_hypergraph(repeated), doctest::Contains("repeated"), InvalidInput);

    // Duplicates are detected up to vertex order.
    std::istringstream dup_reordered("3 6\n1 2 3\n3 2 1\n");
    CHECK_THROWS_WITH_AS(parse_hypergraph(dup_reordered), doctest::Contains("duplicate"), InvalidInput);

    std::istringstream empty("");
    CHECK_THROWS_AS(parse_hypergraph(empty), InvalidInput);
}

TEST_CASE("writer emits canonical form and round-trips") {
    Hypergraph empty(6, 3, {});
    CHECK(write_hypergraph(empty) == "3 6\n");

    Hypergraph h(6, 3, {{5, 6, 1}, {3, 4, 5}, {1, 2, 3}});
    CHECK(write_hypergraph(h) == "3 6\n1 2 3\n1 5 6\n3 4 5\n");

    for (int s = 0; s < 100; ++s) {
        auto g = generate_hnpk(8, 3, 0.5, 4000 + s);
        std::istringstream in(write_hypergraph(g));
        auto back = parse_hypergraph(in);
        REQUIRE(back.m() == g.m());
        CHECK(write_hypergraph(back) == write_hypergraph(g));
    }
}

TEST_CASE("parser survives fuzzed input") {
    Rng rng(99);
    const std::string alphabet = "0123456789 #\n-kx";
    for (int trial = 0; trial < 300; ++trial) {
        std::string text = trial % 3 == 0 ? "3 6\n" : "";
        std::size_t len = rng.below(60);
        for (std::size_t i = 0; i < len; ++i)
            text += alphabet[static_cast<std::size_t>(rng.below(alphabet.size()))];
        std::istringstream in(text);
        try {
            auto h = parse_hypergraph(in);
            CHECK(h.k() >= 2);
        } catch (const InvalidInput&) {
            // rejected, fine
        }
    }
}

TEST_CASE("membership falls back to a hash set past the bitset budget") {
    // C(45,8) ~ 2.2e8 bits exceeds the 2^27 budget.
    Hypergraph h(45, 8, {{1, 2, 3, 4, 5, 6, 7, 8}, {38, 39, 40, 41, 42, 43, 44, 45}});
    CHECK(h.m() == 2);
    CHECK(h.contains(Edge{1, 2, 3, 4, 5, 6, 7, 8}));
    CHECK(h.contains(Edge{38, 39, 40, 41, 42, 43, 44, 45}));
    CHECK_FALSE(h.contains(Edge{1, 2, 3, 4, 5, 6, 7, 9}));
}

TEST_CASE("colex rank/unrank round-trip") {
    BinomTable bt(12, 4);
    std::uint64_t total = bt(12, 4);
    std::vector<std::int32_t> buf(4);
    for (std::uint64_t r = 0; r < total; ++r) {
        bt.unrank(r, 4, buf.data());
        CHECK(bt.rank(buf.begin(), buf.end()) == r);
    }
}
