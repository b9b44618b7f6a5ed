#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "leadcache/types.hpp"

namespace leadcache {

// Bipartite user-cache network. Users and caches carry dense ids in [0, n)
// and [0, m); both adjacency views are sorted and describe the same edges.
// Immutable after construction.
class BipartiteNetwork {
public:
    using Edge = std::pair<CacheId, UserId>;

    BipartiteNetwork() = default;
    BipartiteNetwork(int num_users, int num_caches, std::span<const Edge> edges);

    int num_users() const noexcept { return n_; }
    int num_caches() const noexcept { return m_; }

    std::span<const CacheId> user_caches(UserId i) const { return user_caches_[i]; }
    std::span<const UserId> cache_users(CacheId j) const { return cache_users_[j]; }

    // Max cache degree (d) and max user degree (Delta).
    int max_cache_degree() const noexcept { return d_; }
    int max_user_degree() const noexcept { return delta_; }

    std::size_t num_edges() const noexcept { return edges_.size(); }
    // Edges sorted by (cache, user).
    std::span<const Edge> edges() const noexcept { return edges_; }

    bool connected(UserId i, CacheId j) const;

    friend bool operator==(const BipartiteNetwork& a, const BipartiteNetwork& b)
    {
        return a.n_ == b.n_ && a.m_ == b.m_ && a.edges_ == b.edges_;
    }

private:
    int n_ = 0;
    int m_ = 0;
    int d_ = 0;
    int delta_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<CacheId>> user_caches_;
    std::vector<std::vector<UserId>> cache_users_;
};

// Each cache picks exactly d distinct users uniformly without replacement.
BipartiteNetwork build_random_network(int n, int m, int d, std::uint64_t seed);

// Network document: {"n": .., "m": .., "edges": [[cache_id, user_id], ...]}.
std::string network_to_json(const BipartiteNetwork& net);
BipartiteNetwork network_from_json(const std::string& text);
void save_network(const BipartiteNetwork& net, const std::string& path);
BipartiteNetwork load_network(const std::string& path);

struct CacheColoring {
    std::vector<int> colors;  // per cache, in [0, chi)
    int chi = 0;
};

// Greedy coloring of the cache conflict graph (two caches conflict when some
// user sees both). Caches in id order, smallest free color.
CacheColoring greedy_cache_coloring(const BipartiteNetwork& net);

// True when no user sees two caches with the same color.
bool is_valid_coloring(const BipartiteNetwork& net, const CacheColoring& coloring);

// Adjacency lists of the conflict graph, sorted.
std::vector<std::vector<CacheId>> conflict_graph(const BipartiteNetwork& net);

}  // namespace leadcache
