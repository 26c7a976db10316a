#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "nccut/nc_engine.hpp"
#include "oracles.hpp"

using namespace nccut;

namespace {

RegionGraph chain_graph()
{
    // 0 = seed, 1 = a, 2 = b
    RegionGraph g(3);
    g.set_edge(0, 1, 0.9, 0.0);
    g.set_edge(1, 2, 0.6, 0.0);
    return g;
}

RegionGraph diamond_graph()
{
    // s = 0, a = 1, b = 2, t = 3
    RegionGraph g(4);
    g.set_edge(0, 1, 0.9, 0.2);
    g.set_edge(0, 2, 0.5, 0.0);
    g.set_edge(1, 3, 0.5, 0.0);
    g.set_edge(2, 3, 0.9, 0.0);
    return g;
}

} // namespace

TEST_CASE("lexicographic order")
{
    CHECK(lex_leq({0.4, 0.9}, {0.6, 0.1}));
    CHECK(lex_leq({0.5, 0.8}, {0.5, 0.8}));
    CHECK_FALSE(lex_leq({0.5, 0.9}, {0.5, 0.8}));
    CHECK_FALSE(lex_lt({0.5, 0.8}, {0.5, 0.8}));
    CHECK(lex_lt({0.5, 0.8}, {0.5, 0.9}));
    CHECK(lex_lt({0.3, 0.5}, {0.5, 0.5}));
}

TEST_CASE("path strength")
{
    RegionGraph g(4);
    g.set_edge(0, 1, 0.9, 0.0);
    g.set_edge(1, 2, 0.6, 0.0);
    g.set_edge(2, 3, 0.8, 0.0);
    const std::int32_t p[] = {0, 1, 2, 3};
    const auto s = path_strength(p, g);
    CHECK(s.truth == 0.6);
    CHECK(s.indeterminacy == 0.0);
    CHECK(s.falsity == doctest::Approx(0.4));

    RegionGraph one(2);
    one.set_edge(0, 1, 0.7, 0.3);
    const std::int32_t q[] = {0, 1};
    const auto t = path_strength(q, one);
    CHECK(t.truth == 0.7);
    CHECK(t.indeterminacy == 0.3);
    CHECK(t.falsity == doctest::Approx(0.3));

    const std::int32_t bad[] = {0, 2};
    CHECK_THROWS_AS(path_strength(bad, g), InvalidPath);
}

TEST_CASE("indeterminacy carries past a noisy node")
{
    // seed - 1 - 2 (noisy) - 3 - 4, every edge connectedness 0.9
    RegionGraph g(5);
    for (int k = 0; k < 4; ++k)
        g.set_edge(k, k + 1, 0.9, (k == 1 || k == 2) ? 0.1 : 0.0);
    const NcResult r = compute_nc(g, SeedSet({0}, 5));
    CHECK(r.values[1] == NcPair{0.9, 0.0});
    for (int k = 2; k < 5; ++k)
        CHECK(r.values[static_cast<std::size_t>(k)] == NcPair{0.9, 0.1});
}

TEST_CASE("chain")
{
    const NcResult r = compute_nc(chain_graph(), SeedSet({0}, 3));
    CHECK(r.values[1].truth == 0.9);
    CHECK(r.values[2].truth == 0.6);
    CHECK(r.forest.parent[2] == 1);
    CHECK(r.forest.root[2] == 0);
    CHECK(r.forest.parent[0] == 0);
}

TEST_CASE("diamond prefers the lower indeterminacy path")
{
    const RegionGraph g = diamond_graph();
    const NcResult r = compute_nc(g, SeedSet({0}, 4));
    const auto ref = oracle::path_nc(g, {0});
    CHECK(ref[3] == NcPair{0.5, 0.0});
    CHECK(r.values[3] == ref[3]);
    CHECK(r.forest.parent[3] == 2);
}

TEST_CASE("brute force small cases")
{
    RegionGraph two(2);
    two.set_edge(0, 1, 0.37, 0.21);
    two.set_self_indeterminacy(0, 0.05);
    const auto bf = brute_force_nc(two, SeedSet({0}, 2));
    const auto nc = compute_nc(two, SeedSet({0}, 2));
    CHECK(bf[0] == nc.values[0]);
    CHECK(bf[1] == nc.values[1]);

    RegionGraph g = chain_graph();
    RegionGraph with_island(4);
    with_island.set_edge(0, 1, 0.9, 0.0);
    with_island.set_edge(1, 2, 0.6, 0.0);
    const auto v = brute_force_nc(with_island, SeedSet({0}, 4));
    CHECK(v[3] == NcPair{0, 0});
    const auto c = compute_nc(with_island, SeedSet({0}, 4));
    CHECK(c.values[3] == NcPair{0, 0});
    CHECK_FALSE(c.reached(3));
    // the unreachable region changes nothing else
    const auto base = compute_nc(g, SeedSet({0}, 3));
    for (int k = 0; k < 3; ++k)
        CHECK(c.values[static_cast<std::size_t>(k)] == base.values[static_cast<std::size_t>(k)]);
}

TEST_CASE("library brute force agrees with the path oracle")
{
    fixtures::Noise rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng.engine()() % 8);
        const RegionGraph g = fixtures::random_graph(rng, n, 0.5);
        std::vector<std::int32_t> seeds{0};
        if (n > 4 && rng.unit() < 0.5)
            seeds.push_back(n - 1);
        const auto a = brute_force_nc(g, SeedSet(seeds, static_cast<std::size_t>(n)));
        const auto b = oracle::path_nc(g, seeds);
        for (int r = 0; r < n; ++r)
            CHECK(a[static_cast<std::size_t>(r)] == b[static_cast<std::size_t>(r)]);
    }
}

TEST_CASE("forest properties on random graphs")
{
    fixtures::Noise rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + static_cast<int>(rng.engine()() % 30);
        const RegionGraph g = fixtures::random_graph(rng, n, 0.3);
        const NcResult r = compute_nc(g, SeedSet({0, 1}, static_cast<std::size_t>(n)));
        for (int v = 0; v < n; ++v) {
            if (r.is_seed(v) || !r.reached(v))
                continue;
            const auto p = r.forest.parent[static_cast<std::size_t>(v)];
            CHECK(r.values[static_cast<std::size_t>(v)].truth <= r.values[static_cast<std::size_t>(p)].truth);
            CHECK(r.values[static_cast<std::size_t>(v)].indeterminacy >=
                  r.values[static_cast<std::size_t>(p)].indeterminacy);
            // T and I equal the strength of the forest path from the root
            std::vector<std::int32_t> path{v};
            while (!r.is_seed(path.back()))
                path.push_back(r.forest.parent[static_cast<std::size_t>(path.back())]);
            CHECK(path.back() == r.forest.root[static_cast<std::size_t>(v)]);
            std::reverse(path.begin(), path.end());
            const auto s = path_strength(path, g);
            CHECK(s.truth == r.values[static_cast<std::size_t>(v)].truth);
            CHECK(std::max(s.indeterminacy, g.self_indeterminacy(path.front())) ==
                  r.values[static_cast<std::size_t>(v)].indeterminacy);
        }
    }
}

TEST_CASE("zero indeterminacy reduces to fuzzy connectedness")
{
    fixtures::Noise rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const RegionGraph g = fixtures::random_graph(rng, 8, 0.5).without_indeterminacy();
        const NcResult r = compute_nc(g, SeedSet({0}, 8));
        const auto ref = oracle::path_nc(g, {0});
        for (std::size_t v = 0; v < 8; ++v) {
            CHECK(r.values[v].indeterminacy == 0.0);
            CHECK(r.values[v].truth == ref[v].truth);
        }
    }
}

TEST_CASE("noisy region of the nine-block grid")
{
    const auto f = fixtures::nine_region_grid();
    const SeedSet seeds({0, 2}, 9);
    const NcResult with_i = compute_nc(f.graph, seeds);
    const NcResult without_i = compute_nc(f.graph.without_indeterminacy(), seeds);
    const auto ref = oracle::path_nc(f.graph, {0, 2});
    for (std::size_t r = 0; r < 9; ++r)
        CHECK(with_i.values[r] == ref[r]);
    // block 1 (noisy) and block 3 (clean) are equally well connected
    CHECK(with_i.values[1].truth == with_i.values[3].truth);
    CHECK(with_i.values[1].indeterminacy > with_i.values[3].indeterminacy);
    CHECK(with_i.forest.parent != without_i.forest.parent);
}
