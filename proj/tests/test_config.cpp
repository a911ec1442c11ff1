#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "edapx/config.hpp"

using namespace edapx;

TEST_CASE("config round-trips losslessly") {
    RunConfig c;
    c.seed = 123456789012345ull;
    c.threads = 3;
    c.alphabet = Alphabet::Bytes;
    c.drv.kappa = 0.0123456789012345;
    c.drv.psi_scale_c = 1.75;
    c.gap_thresh_c = 0.09375;
    c.distortion_table[512] = 17.25;
    c.distortion_table[2048] = 21.125;

    const std::string text = serialize_config(c);
    RunConfig back = parse_config(text);
    CHECK(serialize_config(back) == text);
    CHECK(back.seed == c.seed);
    CHECK(back.alphabet == Alphabet::Bytes);
    CHECK(back.drv.kappa == c.drv.kappa);
    CHECK(back.distortion_table == c.distortion_table);
}

TEST_CASE("config parsing: comments, blanks and errors") {
    RunConfig base;
    std::string text = "# comment\n\nseed=42\n" ;
    RunConfig c = parse_config(text);
    CHECK(c.seed == 42);

    CHECK_THROWS_AS(parse_config("unknown_key=1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("seed\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("seed=abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("drv.kappa=0\n"), ConfigError);     // must be positive
    CHECK_THROWS_AS(parse_config("threads=0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("alphabet=hex\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("calib.f.xyz=2\n"), ConfigError);
}

TEST_CASE("config hash tracks content") {
    RunConfig a, b;
    CHECK(config_hash(a) == config_hash(b));
    b.drv.proj_dim += 1;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("distortion table lookup") {
    RunConfig c;
    const double dflt = c.distortion_at(1024);
    CHECK(dflt == c.default_distortion);
    c.distortion_table[512] = 10.0;
    c.distortion_table[2048] = 30.0;
    CHECK(c.distortion_at(256) == 10.0);   // first size at or above
    CHECK(c.distortion_at(512) == 10.0);
    CHECK(c.distortion_at(1024) == 30.0);
    CHECK(c.distortion_at(1 << 20) == 30.0);  // beyond: last entry
}

TEST_CASE("derived driver configs inherit seed and threads") {
    RunConfig c;
    c.seed = 777;
    c.threads = 2;
    CHECK(c.driver().seed == 777);
    CHECK(c.driver().threads == 2);
    CHECK(c.gap_driver().reduce_outer == c.gap_outer);
    CHECK(c.gap_driver().proj_dim == c.drv.proj_dim);
}
