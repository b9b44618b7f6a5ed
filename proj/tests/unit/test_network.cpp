#include <doctest.h>

#include "leadcache/network.hpp"

using namespace leadcache;

TEST_CASE("network adjacency and degrees")
{
    const std::vector<BipartiteNetwork::Edge> e{{1, 0}, {0, 0}, {0, 2}, {1, 1}};
    const BipartiteNetwork net(3, 2, e);
    CHECK(net.num_edges() == 4);
    CHECK(net.max_cache_degree() == 2);
    CHECK(net.max_user_degree() == 2);
    CHECK(std::vector<CacheId>(net.user_caches(0).begin(), net.user_caches(0).end()) ==
          std::vector<CacheId>{0, 1});
    CHECK(std::vector<UserId>(net.cache_users(0).begin(), net.cache_users(0).end()) ==
          std::vector<UserId>{0, 2});
    CHECK(net.connected(2, 0));
    CHECK_FALSE(net.connected(2, 1));
    CHECK(net.edges().front() == BipartiteNetwork::Edge{0, 0});
}

TEST_CASE("network rejects bad edges")
{
    CHECK_THROWS_AS(BipartiteNetwork(2, 1, std::vector<BipartiteNetwork::Edge>{{0, 0}, {0, 0}}),
                    InvalidArgument);
    CHECK_THROWS_AS(BipartiteNetwork(2, 1, std::vector<BipartiteNetwork::Edge>{{1, 0}}),
                    InvalidArgument);
    CHECK_THROWS_AS(BipartiteNetwork(2, 1, std::vector<BipartiteNetwork::Edge>{{0, 2}}),
                    InvalidArgument);
}

TEST_CASE("random networks give every cache exactly d users")
{
    const auto net = build_random_network(30, 10, 8, 4);
    for (CacheId j = 0; j < 10; ++j)
        CHECK(net.cache_users(j).size() == 8);
    CHECK(net.max_cache_degree() == 8);
    CHECK(net == build_random_network(30, 10, 8, 4));
    CHECK_FALSE(net == build_random_network(30, 10, 8, 5));
    CHECK_THROWS_AS(build_random_network(3, 2, 4, 0), InvalidArgument);
}

TEST_CASE("network JSON round trip")
{
    const auto net = build_random_network(7, 4, 3, 1);
    CHECK(network_from_json(network_to_json(net)) == net);
    CHECK_THROWS_AS(network_from_json("{\"n\": 2}"), InvalidArgument);
    CHECK_THROWS_AS(network_from_json("not json"), InvalidArgument);
}

TEST_CASE("greedy coloring is valid and within the degree bound")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto net = build_random_network(12, 8, 3, seed);
        const auto col = greedy_cache_coloring(net);
        CHECK(is_valid_coloring(net, col));
        const int bound = std::max(1, net.max_user_degree() * net.max_cache_degree());
        CHECK(col.chi <= bound);
    }
    // Two caches sharing a user need distinct colors.
    const BipartiteNetwork shared(1, 2, std::vector<BipartiteNetwork::Edge>{{0, 0}, {1, 0}});
    CacheColoring same{{0, 0}, 1};
    CHECK_FALSE(is_valid_coloring(shared, same));
    CHECK(greedy_cache_coloring(shared).chi == 2);
    const auto g = conflict_graph(shared);
    CHECK(g[0] == std::vector<CacheId>{1});
    CHECK(g[1] == std::vector<CacheId>{0});
}
