#include <doctest.h>

#include <random>

#include "leadcache/kernels.hpp"
#include "leadcache/random.hpp"

using namespace leadcache;
namespace k = leadcache::kernels;

namespace {
k::Rows random_rows(std::size_t r, std::size_t c, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::bernoulli_distribution sparse(0.3);
    k::Rows rows(r, std::vector<double>(c, 0.0));
    for (auto& row : rows)
        for (double& v : row)
            if (sparse(rng))
                v = u(rng);
    return rows;
}
}  // namespace

TEST_CASE("pivot: serial reference by hand")
{
    k::Rows rows{{2, 4, 0}, {1, 1, 1}};
    std::vector<double> obj{3, 1, 0};
    k::serial::pivot(rows, obj, 0, 0);
    CHECK(rows[0] == std::vector<double>{1, 2, 0});
    CHECK(rows[1] == std::vector<double>{0, -1, 1});
    CHECK(obj == std::vector<double>{0, -5, 0});
}

TEST_CASE("pivot: parallel is bit-identical on a large tableau")
{
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto a = random_rows(300, 400, seed);
        a[7][11] = 0.75;
        auto b = a;
        std::vector<double> oa(400, 0.5), ob = oa;
        REQUIRE(300 * 400 > k::kParallelPivotThreshold);
        k::serial::pivot(a, oa, 7, 11);
        k::parallel::pivot(b, ob, 7, 11);
        CHECK(a == b);
        CHECK(oa == ob);
        for (std::size_t r = 0; r < a.size(); ++r)
            CHECK(a[r][11] == (r == 7 ? 1.0 : 0.0));
    }
}

TEST_CASE("reduced costs agree")
{
    const auto rows = random_rows(120, 700, 4);
    std::vector<double> cost(700), basic(120);
    for (std::size_t c = 0; c < cost.size(); ++c)
        cost[c] = std::sin(double(c));
    for (std::size_t r = 0; r < basic.size(); ++r)
        basic[r] = std::cos(double(r));
    std::vector<double> s, p;
    k::serial::reduced_costs(rows, cost, basic, s);
    k::parallel::reduced_costs(rows, cost, basic, p);
    CHECK(s == p);
    double d0 = cost[0];
    for (std::size_t r = 0; r < rows.size(); ++r)
        d0 -= basic[r] * rows[r][0];
    CHECK(s[0] == doctest::Approx(d0));
}

TEST_CASE("top bins load agrees and is bounded")
{
    const auto s = k::serial::top_bins_load(6, 3, 200, 500, 7);
    const auto p = k::parallel::top_bins_load(6, 3, 200, 500, 7);
    CHECK(s == p);
    for (auto v : s) {
        CHECK(v >= 100);
        CHECK(v <= 200);
    }
}

TEST_CASE("count indicators agrees")
{
    auto sample = [](std::int64_t d, std::vector<char>& out) {
        const auto h = derive_seed(11, {static_cast<std::uint64_t>(d)});
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = ((h >> i) & 1U) != 0;
    };
    std::vector<std::int64_t> s(16, 0), p(16, 0);
    k::serial::count_indicators(20000, 16, sample, s);
    k::parallel::count_indicators(20000, 16, sample, p);
    CHECK(s == p);
    for (auto c : s)
        CHECK(std::abs(c / 20000.0 - 0.5) < 0.02);
}
