#include <doctest.h>

#include "nccut/config.hpp"
#include "nccut/error.hpp"

using namespace nccut;

TEST_CASE("config parsing")
{
    const Config c = parse_config("# tuned\neta = 25\n  k_gmm=3  # fewer components\n\nindeterminacy_enabled = false\n"
                                  "density_scale = linear\n");
    CHECK(c.eta == 25);
    CHECK(c.k_gmm == 3);
    CHECK_FALSE(c.indeterminacy_enabled);
    CHECK(c.density_scale == DensityScale::Linear);
    CHECK(c.delta_t == Config{}.delta_t);
}

TEST_CASE("config errors")
{
    CHECK_THROWS_AS(parse_config("bogus = 1\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("eta\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("eta = fast\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("k_gmm = 0\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("epsilon = 2\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("density_scale = cubic\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("indeterminacy_enabled = maybe\n"), InvalidInput);
}

TEST_CASE("config round trip")
{
    Config c;
    c.delta_b = 12.5;
    c.max_iterations = 4;
    c.t_clamp = 1e-9;
    c.density_scale = DensityScale::Literal;
    c.indeterminacy_enabled = false;
    const Config back = parse_config(format_config(c));
    CHECK(format_config(back) == format_config(c));
    CHECK(back.t_clamp == c.t_clamp);
    CHECK(back.density_scale == DensityScale::Literal);
}

TEST_CASE("density scale names")
{
    for (auto s : {DensityScale::Log, DensityScale::Linear, DensityScale::Literal})
        CHECK(parse_density_scale(density_scale_name(s)) == s);
}
