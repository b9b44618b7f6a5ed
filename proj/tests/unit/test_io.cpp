#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "leadcache/io.hpp"
#include "leadcache/lp.hpp"

using namespace leadcache;

TEST_CASE("doubles print back to themselves")
{
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123, -2.5, 0.0})
        CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("theta CSV round trip")
{
    const std::vector<Coefficient> theta{{0, 3, 1.25}, {2, 1, 1.0 / 7.0}};
    std::stringstream ss;
    write_theta_csv(ss, theta);
    CHECK(ss.str().rfind("user_id,file_id,value\n", 0) == 0);
    CHECK(read_theta_csv(ss) == theta);
    std::istringstream bad("user_id,file_id,value\n0,1\n");
    CHECK_THROWS_AS(read_theta_csv(bad), ParseError);
}

TEST_CASE("fractional allocation CSV round trip")
{
    std::mt19937_64 rng(3);
    const auto net = testutil::random_network(3, 2, rng);
    const auto frac = solve_lp(build_lp(testutil::random_theta(3, 5, rng), net, 2));
    std::stringstream ss;
    write_fractional_csv(ss, frac);
    const auto back = read_fractional_csv(ss);
    CHECK(back.num_caches == frac.num_caches);
    CHECK(back.capacity == frac.capacity);
    CHECK(back.files == frac.files);
    CHECK(back.y == frac.y);
    CHECK(back.slack == frac.slack);
    CHECK(back.z == frac.z);
    CHECK(back.objective == frac.objective);
}

TEST_CASE("configuration CSV round trip")
{
    CacheConfiguration y(3, 2);
    y.assign(0, {4, 1});
    y.assign(2, {0});
    std::stringstream ss;
    write_configuration_csv(ss, y);
    CHECK(ss.str() == "cache_id,file_id\n0,1\n0,4\n2,0\n");
    CHECK(read_configuration_csv(ss, 3, 2) == y);
    std::istringstream over("cache_id,file_id\n5,1\n");
    CHECK_THROWS_AS(read_configuration_csv(over, 3, 2), ParseError);
}

TEST_CASE("metrics CSV")
{
    std::ostringstream out;
    write_metrics_csv(out, {{1, "lru", 2, 1, 2, 1}, {2, "lru", 0, 3, 2, 4}});
    CHECK(out.str() == "t,policy,hits,fetches,cum_hits,cum_fetches\n1,lru,2,1,2,1\n2,lru,0,3,2,4\n");
}
