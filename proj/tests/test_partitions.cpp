#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hampack/partitions.hpp"

using namespace hampack;

namespace {

PartitionScheme hand_scheme_635() {
    // X-blocks {2},{1},{3}; Y-blocks {5},{4},{6} on n=6, k=3, ell=2.
    PartitionScheme s;
    s.id = 1;
    s.mode = PartitionMode::BipartitionCycle;
    s.n = 6;
    s.k = 3;
    s.ell = 2;
    s.x_blocks = {{2}, {1}, {3}};
    s.y_blocks = {{5}, {4}, {6}};
    s.build_index();
    return s;
}

void check_partition_validity(const PartitionScheme& s, int x_size, int y_size) {
    std::vector<int> seen(static_cast<std::size_t>(s.n) + 1, 0);
    REQUIRE(s.x_blocks.size() == static_cast<std::size_t>(s.nu()));
    for (const auto& blk : s.x_blocks) {
        REQUIRE(static_cast<int>(blk.size()) == x_size);
        CHECK(std::is_sorted(blk.begin(), blk.end()));
        for (Vertex v : blk) ++seen[static_cast<std::size_t>(v)];
    }
    if (y_size > 0) {
        REQUIRE(s.y_blocks.size() == static_cast<std::size_t>(s.nu()));
        for (const auto& blk : s.y_blocks) {
            REQUIRE(static_cast<int>(blk.size()) == y_size);
            for (Vertex v : blk) ++seen[static_cast<std::size_t>(v)];
        }
    } else {
        CHECK(s.y_blocks.empty());
    }
    for (int v = 1; v <= s.n; ++v) CHECK(seen[static_cast<std::size_t>(v)] == 1);
}

} // namespace

TEST_CASE("mode dispatch") {
    CHECK(*mode_for(3, 2) == PartitionMode::BipartitionCycle);
    CHECK(*mode_for(4, 3) == PartitionMode::BipartitionCycle);
    CHECK(*mode_for(4, 2) == PartitionMode::FullPartition);
    CHECK(*mode_for(2, 1) == PartitionMode::FullPartition);
    CHECK(*mode_for(4, 4) == PartitionMode::Matching);
    CHECK_FALSE(mode_for(4, 1).has_value());
    CHECK_FALSE(mode_for(6, 2).has_value());
    CHECK_FALSE(mode_for(3, 4).has_value());
}

TEST_CASE("sample_scheme produces the prescribed block structure") {
    for (int i = 1; i <= 50; ++i) {
        auto s = sample_scheme(6, 3, 2, PartitionMode::BipartitionCycle, 42, i);
        check_partition_validity(s, 1, 1);
    }
    for (int i = 1; i <= 50; ++i) {
        auto s = sample_scheme(8, 4, 2, PartitionMode::FullPartition, 42, i);
        check_partition_validity(s, 2, 0);
    }
    for (int i = 1; i <= 50; ++i) {
        auto s = sample_scheme(8, 4, 4, PartitionMode::Matching, 42, i);
        check_partition_validity(s, 2, 2);
    }
    // Odd k matching: k_X = 1, k_Y = 2.
    auto s9 = sample_scheme(9, 3, 3, PartitionMode::Matching, 42, 1);
    check_partition_validity(s9, 1, 2);
}

TEST_CASE("sample_scheme errors") {
    CHECK_THROWS_AS(sample_scheme(7, 3, 2, PartitionMode::BipartitionCycle, 1, 1), InvalidInput);
    CHECK_THROWS_AS(sample_scheme(12, 6, 2, PartitionMode::BipartitionCycle, 1, 1), UnsupportedCase);
    CHECK_THROWS_AS(sample_scheme(8, 4, 2, PartitionMode::BipartitionCycle, 1, 1), UnsupportedCase);
    // nu < 3 has no cyclic block structure.
    CHECK_THROWS_AS(sample_scheme(8, 6, 4, PartitionMode::BipartitionCycle, 1, 1), UnsupportedCase);
}

TEST_CASE("sample_scheme determinism per (seed, instance)") {
    auto a = sample_scheme(10, 3, 2, PartitionMode::BipartitionCycle, 7, 3);
    auto b = sample_scheme(10, 3, 2, PartitionMode::BipartitionCycle, 7, 3);
    CHECK(a.x_blocks == b.x_blocks);
    CHECK(a.y_blocks == b.y_blocks);
    auto c = sample_scheme(10, 3, 2, PartitionMode::BipartitionCycle, 7, 4);
    CHECK(a.x_blocks != c.x_blocks);
}

TEST_CASE("side membership is symmetric over samples") {
    const int samples = 10000;
    std::vector<int> x_count(7, 0);
    for (int i = 1; i <= samples; ++i) {
        auto s = sample_scheme(6, 3, 2, PartitionMode::BipartitionCycle, 99, i);
        for (const auto& blk : s.x_blocks)
            for (Vertex v : blk) ++x_count[static_cast<std::size_t>(v)];
    }
    for (int v = 1; v <= 6; ++v) {
        double freq = static_cast<double>(x_count[static_cast<std::size_t>(v)]) / samples;
        CHECK(std::abs(freq - 0.5) <= 0.02);
    }
}

TEST_CASE("edge_inclusions witnesses") {
    auto s = hand_scheme_635();
    Edge e1{1, 2, 5};
    auto w1 = edge_inclusions(s, e1);
    REQUIRE(w1.size() == 1);
    CHECK(w1[0] == InclusionWitness{1, 1});

    Edge e2{2, 3, 6}; // cyclic wrap: X_3 u X_1 with Y_3
    auto w2 = edge_inclusions(s, e2);
    REQUIRE(w2.size() == 1);
    CHECK(w2[0] == InclusionWitness{3, 3});

    Edge e3{1, 2, 3}; // no Y vertex
    CHECK(edge_inclusions(s, e3).empty());
}

TEST_CASE("edge_inclusions witness uniqueness over all k-sets") {
    for (int i = 1; i <= 20; ++i) {
        auto s = sample_scheme(8, 3, 2, PartitionMode::BipartitionCycle, 5, i);
        for_each_combination(8, 3, [&](const std::vector<Vertex>& e) {
            CHECK(edge_inclusions(s, e).size() <= 1);
        });
    }
    for (int i = 1; i <= 20; ++i) {
        auto s = sample_scheme(8, 4, 2, PartitionMode::FullPartition, 5, i);
        for_each_combination(8, 4, [&](const std::vector<Vertex>& e) {
            auto ws = edge_inclusions(s, e);
            CHECK(ws.size() <= 1);
            if (!ws.empty()) CHECK(ws[0].a < ws[0].b);
        });
    }
}

TEST_CASE("edge_inclusions agrees with explicit block-pattern enumeration") {
    // Brute-force oracle: rebuild every candidate union and compare sets.
    auto union_of = [](std::initializer_list<const std::vector<Vertex>*> blocks) {
        Edge e;
        for (const auto* b : blocks) e.insert(e.end(), b->begin(), b->end());
        std::sort(e.begin(), e.end());
        return e;
    };
    auto check_scheme = [&](const PartitionScheme& s) {
        const int nu = s.nu();
        for_each_combination(s.n, s.k, [&](const std::vector<Vertex>& e) {
            std::vector<InclusionWitness> expected;
            for (int a = 0; a < nu; ++a)
                for (int b = 0; b < nu; ++b) {
                    if (s.mode == PartitionMode::BipartitionCycle) {
                        if (union_of({&s.x_blocks[static_cast<std::size_t>(a)],
                                      &s.y_blocks[static_cast<std::size_t>(b)],
                                      &s.x_blocks[static_cast<std::size_t>((a + 1) % nu)]}) == e)
                            expected.push_back({a + 1, b + 1});
                    } else if (s.mode == PartitionMode::Matching) {
                        if (union_of({&s.x_blocks[static_cast<std::size_t>(a)],
                                      &s.y_blocks[static_cast<std::size_t>(b)]}) == e)
                            expected.push_back({a + 1, b + 1});
                    } else if (a < b) {
                        if (union_of({&s.x_blocks[static_cast<std::size_t>(a)],
                                      &s.x_blocks[static_cast<std::size_t>(b)]}) == e)
                            expected.push_back({a + 1, b + 1});
                    }
                }
            CHECK(edge_inclusions(s, e) == expected);
        });
    };
    for (int i = 1; i <= 5; ++i) {
        check_scheme(sample_scheme(9, 4, 3, PartitionMode::BipartitionCycle, 13, i));
        check_scheme(sample_scheme(10, 4, 2, PartitionMode::FullPartition, 13, i));
        check_scheme(sample_scheme(8, 4, 4, PartitionMode::Matching, 13, i));
        check_scheme(sample_scheme(9, 3, 3, PartitionMode::Matching, 13, i));
    }
}

TEST_CASE("inclusion probability matches rho") {
    // Remark-2 check: empirical inclusion frequency over many schemes.
    const int m_samples = 100000;
    auto run = [&](int n, int k, int ell, PartitionMode mode, Edge e, double rho) {
        int hits = 0;
        for (int i = 1; i <= m_samples; ++i) {
            auto s = sample_scheme(n, k, ell, mode, 1234, i);
            if (!edge_inclusions(s, e).empty()) ++hits;
        }
        double freq = static_cast<double>(hits) / m_samples;
        double tol = 4.0 * std::sqrt(rho * (1.0 - rho) / m_samples);
        CHECK(std::abs(freq - rho) <= tol);
    };
    run(6, 3, 2, PartitionMode::BipartitionCycle, {1, 2, 5}, 0.45);
    run(8, 4, 2, PartitionMode::FullPartition, {2, 3, 5, 8}, 6.0 / 70.0);
}

TEST_CASE("label_edges basics") {
    // One scheme including exactly the three edges of a loose cycle.
    Hypergraph h(6, 3, {{1, 2, 5}, {1, 3, 4}, {2, 3, 6}, {4, 5, 6}});
    auto s = hand_scheme_635();
    auto labels = label_edges(h, {s}, 7);
    REQUIRE(labels.f.size() == 4);
    int labeled = 0;
    for (std::size_t e = 0; e < h.m(); ++e) {
        if (labels.label[e] != 0) {
            CHECK(labels.f[e] == 1);
            CHECK(labels.label[e] == 1);
            ++labeled;
        } else {
            CHECK(labels.f[e] == 0);
        }
    }
    CHECK(labeled == 3); // {4,5,6} is all-Y, not included
    CHECK(labels.unlabeled_count == 1);
}

TEST_CASE("label choice is uniform between two including instances") {
    // Two hand-built schemes that both include {1,2,5}.
    auto s1 = hand_scheme_635();
    auto s2 = hand_scheme_635();
    s2.id = 2;
    std::swap(s2.y_blocks[1], s2.y_blocks[2]); // still includes (1,1)
    s2.build_index();
    Hypergraph h(6, 3, {{1, 2, 5}});
    int first = 0;
    const int seeds = 10000;
    for (int seed = 0; seed < seeds; ++seed) {
        auto labels = label_edges(h, {s1, s2}, static_cast<std::uint64_t>(seed));
        REQUIRE(labels.f[0] == 2);
        if (labels.label[0] == 1) ++first;
    }
    double freq = static_cast<double>(first) / seeds;
    CHECK(std::abs(freq - 0.5) <= 0.02);
}

TEST_CASE("label_edges is independent of scheme order") {
    auto h = generate_hnpk(12, 3, 0.5, 3);
    std::vector<PartitionScheme> schemes;
    for (int i = 1; i <= 30; ++i)
        schemes.push_back(sample_scheme(12, 3, 2, PartitionMode::BipartitionCycle, 11, i));
    auto base = label_edges(h, schemes, 5);
    std::reverse(schemes.begin(), schemes.end());
    std::swap(schemes[0], schemes[7]);
    auto shuffled = label_edges(h, schemes, 5);
    CHECK(base.f == shuffled.f);
    CHECK(base.label == shuffled.label);
}

TEST_CASE("f(E) moments at complete H") {
    // f(E) ~ Bin(r, rho); over a complete hypergraph the empirical mean is
    // exactly r*nu^2/C(n,k) because every scheme includes nu^2 edges. The
    // per-seed sample variance swings hard (inclusions of overlapping edges
    // are correlated), so the variance check pools seeds.
    const int n = 12, k = 3, ell = 2;
    const std::int64_t r = 1000;
    auto h = generate_hnpk(n, k, 1.0, 0);
    const double rho = 36.0 / 220.0;

    double pooled_var = 0;
    const int seed_count = 40;
    for (int seed = 1; seed <= seed_count; ++seed) {
        std::vector<PartitionScheme> schemes;
        for (std::int64_t i = 1; i <= r; ++i)
            schemes.push_back(sample_scheme(n, k, ell, PartitionMode::BipartitionCycle, seed, i));
        auto labels = label_edges(h, schemes, static_cast<std::uint64_t>(seed));

        double mean = 0;
        for (auto f : labels.f) mean += f;
        mean /= static_cast<double>(labels.f.size());
        CHECK(mean == doctest::Approx(static_cast<double>(r) * rho).epsilon(1e-12));

        double var = 0;
        for (auto f : labels.f) var += (f - mean) * (f - mean);
        pooled_var += var / static_cast<double>(labels.f.size() - 1);
    }
    pooled_var /= seed_count;
    CHECK(std::abs(pooled_var - r * rho * (1 - rho)) / (r * rho * (1 - rho)) <= 0.05);
}

TEST_CASE("scheme_parameters: rho formulas") {
    auto sp = scheme_parameters(6, 3, 2, 0.5, PartitionMode::BipartitionCycle);
    CHECK(sp.rho == 0.45); // nu^2 / C(6,3) = 9/20

    auto sp2 = scheme_parameters(8, 4, 2, 0.5, PartitionMode::FullPartition);
    CHECK(sp2.rho == 6.0 / 70.0); // C(4,2) / C(8,4)

    auto sp3 = scheme_parameters(8, 4, 4, 0.5, PartitionMode::Matching);
    CHECK(sp3.rho == 4.0 / 70.0); // nu_k^2 / C(8,4)
}

TEST_CASE("scheme_parameters: eps from the k=3 formula") {
    // With 72 n ln n / r = 0.25, eps must come out 0.5.
    const int n = 10;
    const double r = 72.0 * n * std::log(static_cast<double>(n)) / 0.25;
    ParameterOverrides ov;
    ov.r = r;
    auto sp = scheme_parameters(n, 3, 2, 0.5, PartitionMode::BipartitionCycle, ov);
    CHECK(sp.eps == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("scheme_parameters: derived quantities and overrides") {
    ParameterOverrides ov;
    ov.r = 500;
    auto sp = scheme_parameters(24, 3, 2, 0.6, PartitionMode::BipartitionCycle, ov);
    CHECK(sp.r == 500);
    CHECK(sp.r_theoretical == doctest::Approx(24.0 * std::sqrt(24.0 * 0.6)));
    CHECK(sp.p0 == doctest::Approx(0.6 / sp.f0));
    CHECK(sp.n0 == doctest::Approx((1.0 - sp.eps) * 12.0 * sp.p0));
    const double rrho = 500.0 * sp.rho;
    CHECK(sp.f0 == doctest::Approx(rrho + std::sqrt(12.0 * rrho * std::log(24.0))));

    ov.f0 = 3.0;
    ov.eps = 0.25;
    auto pinned = scheme_parameters(24, 3, 2, 0.6, PartitionMode::BipartitionCycle, ov);
    CHECK(pinned.f0 == 3.0);
    CHECK(pinned.eps == 0.25);
    CHECK(pinned.p0 == doctest::Approx(0.2));

    CHECK_THROWS_AS(scheme_parameters(24, 6, 2, 0.6, PartitionMode::BipartitionCycle), UnsupportedCase);
    CHECK_THROWS_AS(scheme_parameters(23, 3, 2, 0.6, PartitionMode::BipartitionCycle), InvalidInput);
}

TEST_CASE("scheme_parameters flags degenerate formula outputs") {
    ParameterOverrides ov;
    ov.r = 10;
    auto sp = scheme_parameters(24, 3, 2, 0.6, PartitionMode::BipartitionCycle, ov);
    // eps = sqrt(72 * 24 * ln 24 / 10) >> 1 at this scale.
    CHECK(sp.eps > 1.0);
    bool flagged = false;
    for (const auto& d : sp.diagnostics) flagged |= d.find("eps") != std::string::npos;
    CHECK(flagged);
}
