#include "leadcache/network.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "leadcache/random.hpp"

namespace leadcache {

BipartiteNetwork::BipartiteNetwork(int num_users, int num_caches, std::span<const Edge> edges)
    : n_(num_users), m_(num_caches), edges_(edges.begin(), edges.end())
{
    if (n_ < 0 || m_ < 0)
        throw InvalidArgument("network: negative size");
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw InvalidArgument("network: duplicate edge");
    user_caches_.assign(n_, {});
    cache_users_.assign(m_, {});
    for (const auto& [j, i] : edges_) {
        if (j < 0 || j >= m_ || i < 0 || i >= n_)
            throw InvalidArgument("network: edge endpoint out of range");
        cache_users_[j].push_back(i);
        user_caches_[i].push_back(j);
    }
    for (auto& v : user_caches_)
        std::sort(v.begin(), v.end());
    for (const auto& v : cache_users_)
        d_ = std::max<int>(d_, static_cast<int>(v.size()));
    for (const auto& v : user_caches_)
        delta_ = std::max<int>(delta_, static_cast<int>(v.size()));
}

bool BipartiteNetwork::connected(UserId i, CacheId j) const
{
    const auto& v = cache_users_.at(j);
    return std::binary_search(v.begin(), v.end(), i);
}

BipartiteNetwork build_random_network(int n, int m, int d, std::uint64_t seed)
{
    if (n < 1 || m < 1)
        throw InvalidArgument("build_random_network: n and m must be >= 1");
    if (d < 1 || d > n)
        throw InvalidArgument("build_random_network: invalid degree d=" + std::to_string(d) +
                              " for n=" + std::to_string(n));
    Rng rng = make_rng(seed);
    std::vector<BipartiteNetwork::Edge> edges;
    edges.reserve(static_cast<std::size_t>(m) * d);
    std::vector<UserId> users(n);
    for (CacheId j = 0; j < m; ++j) {
        std::iota(users.begin(), users.end(), 0);
        // Partial Fisher-Yates: the first d entries are a uniform d-subset.
        for (int k = 0; k < d; ++k) {
            std::uniform_int_distribution<int> pick(k, n - 1);
            std::swap(users[k], users[pick(rng)]);
            edges.emplace_back(j, users[k]);
        }
    }
    return BipartiteNetwork(n, m, edges);
}

std::string network_to_json(const BipartiteNetwork& net)
{
    nlohmann::json doc;
    doc["n"] = net.num_users();
    doc["m"] = net.num_caches();
    auto edges = nlohmann::json::array();
    for (const auto& [j, i] : net.edges())
        edges.push_back({j, i});
    doc["edges"] = std::move(edges);
    return doc.dump(1) + "\n";
}

BipartiteNetwork network_from_json(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("network document: ") + e.what());
    }
    if (!doc.contains("n") || !doc.contains("m") || !doc.contains("edges"))
        throw InvalidArgument("network document: requires fields n, m, edges");
    std::vector<BipartiteNetwork::Edge> edges;
    for (const auto& e : doc.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw InvalidArgument("network document: edge must be [cache_id, user_id]");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return BipartiteNetwork(doc.at("n").get<int>(), doc.at("m").get<int>(), edges);
}

void save_network(const BipartiteNetwork& net, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw InvalidArgument("cannot write network file: " + path);
    out << network_to_json(net);
}

BipartiteNetwork load_network(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open network file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return network_from_json(ss.str());
}

std::vector<std::vector<CacheId>> conflict_graph(const BipartiteNetwork& net)
{
    std::vector<std::vector<CacheId>> adj(net.num_caches());
    for (UserId i = 0; i < net.num_users(); ++i) {
        auto cs = net.user_caches(i);
        for (std::size_t a = 0; a < cs.size(); ++a)
            for (std::size_t b = a + 1; b < cs.size(); ++b) {
                adj[cs[a]].push_back(cs[b]);
                adj[cs[b]].push_back(cs[a]);
            }
    }
    for (auto& v : adj) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return adj;
}

CacheColoring greedy_cache_coloring(const BipartiteNetwork& net)
{
    const auto adj = conflict_graph(net);
    CacheColoring out;
    out.colors.assign(net.num_caches(), -1);
    std::vector<char> used;
    for (CacheId j = 0; j < net.num_caches(); ++j) {
        used.assign(adj[j].size() + 1, 0);
        for (CacheId k : adj[j]) {
            const int c = out.colors[k];
            if (c >= 0 && c < static_cast<int>(used.size()))
                used[c] = 1;
        }
        int c = 0;
        while (used[c])
            ++c;
        out.colors[j] = c;
        out.chi = std::max(out.chi, c + 1);
    }
    return out;
}

bool is_valid_coloring(const BipartiteNetwork& net, const CacheColoring& coloring)
{
    if (static_cast<int>(coloring.colors.size()) != net.num_caches())
        return false;
    for (int c : coloring.colors)
        if (c < 0 || c >= coloring.chi)
            return false;
    std::vector<int> seen;
    for (UserId i = 0; i < net.num_users(); ++i) {
        seen.clear();
        for (CacheId j : net.user_caches(i))
            seen.push_back(coloring.colors[j]);
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
            return false;
    }
    return true;
}

}  // namespace leadcache
