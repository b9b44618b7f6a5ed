#include <doctest.h>

#include "helpers.hpp"
#include "leadcache/exact.hpp"

using namespace leadcache;

namespace {
BipartiteNetwork single(int n_users, int n_caches)
{
    std::vector<BipartiteNetwork::Edge> e;
    for (int j = 0; j < n_caches; ++j)
        for (int i = 0; i < n_users; ++i)
            e.emplace_back(j, i);
    return BipartiteNetwork(n_users, n_caches, e);
}
}  // namespace

TEST_CASE("exact: argmax for one user and one cache")
{
    const auto net = single(1, 1);
    std::vector<Coefficient> theta{{0, 0, 3}, {0, 1, 1}, {0, 2, 2}};
    const auto r = exact_ilp(theta, net, 1, 1e6);
    CHECK(r.config.files(0).size() == 1);
    CHECK(r.config.files(0)[0] == 0);
    CHECK(r.value == doctest::Approx(3));
}

TEST_CASE("exact: two caches shared by one user split the files")
{
    const auto net = single(1, 2);
    std::vector<Coefficient> theta{{0, 0, 5}, {0, 1, 4}};
    const auto r = exact_ilp(theta, net, 1, 1e6);
    CHECK(r.value == doctest::Approx(9));
    CHECK(r.config.files(0)[0] != r.config.files(1)[0]);
    // Lexicographic tie-break: cache 0 gets the smaller id.
    CHECK(r.config.files(0)[0] == 0);
}

TEST_CASE("exact: agrees with brute force, including the tie-break")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 1 + rng() % 4, m = 1 + rng() % 3, N = 2 + rng() % 5, C = 1 + rng() % 2;
        const auto net = testutil::random_network(n, m, rng);
        auto theta = testutil::random_theta(n, N, rng);
        if (trial % 3 == 0)
            for (auto& c : theta)
                c.value = 1.0;  // plenty of ties
        std::vector<FileId> catalog(N);
        for (int f = 0; f < N; ++f)
            catalog[f] = f;
        const auto r = exact_ilp(theta, net, C, 1e9, catalog);
        const auto bf = testutil::brute_force(theta, net, C, N);
        REQUIRE(r.value == doctest::Approx(bf.value));
        CHECK(r.config == testutil::to_config(bf.best, C));
        CHECK(placement_value(theta, net, r.config) == doctest::Approx(bf.value));
    }
}

TEST_CASE("exact: support-restricted search matches the full catalog value")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + rng() % 4, m = 1 + rng() % 3, N = 3 + rng() % 4, C = 1 + rng() % 2;
        const auto net = testutil::random_network(n, m, rng);
        const auto theta = testutil::random_theta(n, N, rng, 0.3);
        const auto r = exact_ilp(theta, net, C, 1e9);
        CHECK(r.value == doctest::Approx(testutil::brute_force(theta, net, C, N).value));
    }
}

TEST_CASE("exact: scaling the weights keeps the configuration")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const auto net = testutil::random_network(3, 2, rng);
        auto theta = testutil::random_theta(3, 5, rng);
        const auto a = exact_ilp(theta, net, 2, 1e9);
        for (auto& c : theta)
            c.value *= 7.5;
        const auto b = exact_ilp(theta, net, 2, 1e9);
        CHECK(a.config == b.config);
        CHECK(b.value == doctest::Approx(7.5 * a.value));
    }
}

TEST_CASE("exact: empty or non-positive weights give the empty configuration")
{
    const auto net = single(2, 2);
    std::vector<Coefficient> theta{{0, 1, -1.0}, {1, 2, 0.0}};
    const auto r = exact_ilp(theta, net, 2, 1e6);
    CHECK(r.value == 0.0);
    CHECK(r.config == CacheConfiguration(2, 2));
}

TEST_CASE("exact: enumeration budget")
{
    CHECK(configuration_count(20, 2, 3) == doctest::Approx(190.0 * 190.0 * 190.0));
    CHECK(configuration_count(3, 5, 2) == doctest::Approx(1.0));
    const auto net = single(1, 3);
    std::vector<Coefficient> theta;
    for (int f = 0; f < 20; ++f)
        theta.push_back({0, f, 1.0 + f});
    CHECK_THROWS_AS(exact_ilp(theta, net, 2, 1e6), BudgetExceeded);
    CHECK_NOTHROW(exact_ilp(theta, net, 2, 1e7));
}
