#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "nccut/maxflow.hpp"
#include "oracles.hpp"

using namespace nccut;

namespace {

FlowNetwork random_network(fixtures::Noise& rng, std::size_t n)
{
    FlowNetwork net;
    net.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // sparse terminals with occasional exact zeros
        net.cost0[i] = rng.unit() < 0.2 ? 0.0 : 10 * rng.unit();
        net.cost1[i] = rng.unit() < 0.2 ? 0.0 : 10 * rng.unit();
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (rng.unit() < 0.5)
                net.links.push_back({static_cast<std::int32_t>(a), static_cast<std::int32_t>(b), 8 * rng.unit()});
    return net;
}

} // namespace

TEST_CASE("terminal-only network takes the cheaper side per node")
{
    FlowNetwork net;
    net.resize(3);
    net.cost0 = {1.0, 5.0, 2.0};
    net.cost1 = {4.0, 0.5, 7.0};
    const CutResult r = max_flow_min_cut(net);
    CHECK(r.labeling == std::vector<std::uint8_t>{0, 1, 0});
    CHECK(r.cut_value == doctest::Approx(1.0 + 0.5 + 2.0));
    CHECK(r.flow == doctest::Approx(r.cut_value));
}

TEST_CASE("min cut equals exhaustive enumeration")
{
    fixtures::Noise rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.engine()() % 8;
        const FlowNetwork net = random_network(rng, n);
        const CutResult r = max_flow_min_cut(net);
        const auto e = oracle::enumerate_cut(net);
        CHECK(r.cut_value == doctest::Approx(e.min_energy).epsilon(1e-12));
        CHECK(r.flow == doctest::Approx(e.min_energy).epsilon(1e-12));
        CHECK(oracle::labeling_energy(net, r.labeling) == doctest::Approx(e.min_energy).epsilon(1e-12));
        CHECK(cut_cost(net, r.labeling) == doctest::Approx(e.min_energy).epsilon(1e-12));
    }
}

TEST_CASE("invalid capacities")
{
    FlowNetwork net;
    net.resize(2);
    net.cost0[0] = -1;
    CHECK_THROWS_AS(max_flow_min_cut(net), NumericalError);
    net.cost0[0] = 1;
    net.links.push_back({0, 1, std::nan("")});
    CHECK_THROWS_AS(max_flow_min_cut(net), NumericalError);
}

TEST_CASE("dimacs output")
{
    FlowNetwork net;
    net.resize(2);
    net.cost0 = {3, 0};
    net.cost1 = {0, 2};
    net.links.push_back({0, 1, 1.5});
    std::ostringstream out;
    write_dimacs(net, out);
    CHECK(out.str() == "p max 4 4\nn 3 s\nn 4 t\na 3 1 3\na 2 4 2\na 1 2 1.5\na 2 1 1.5\n");
}
