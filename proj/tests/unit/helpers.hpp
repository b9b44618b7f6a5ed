#pragma once

// Brute-force references and small random instances shared by the tests.

#include <algorithm>
#include <random>
#include <vector>

#include "leadcache/coefficients.hpp"
#include "leadcache/network.hpp"
#include "leadcache/reward.hpp"

namespace testutil {

using namespace leadcache;

// All k-subsets of [0, N) in lexicographic order.
inline std::vector<std::vector<FileId>> subsets(int N, int k)
{
    std::vector<std::vector<FileId>> out;
    std::vector<FileId> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int f = start; f < N; ++f) {
            cur.push_back(f);
            self(self, f + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

// Direct evaluation of sum theta+ min(1, sum_{j in N(i)} y^j_f).
inline double value_of(const std::vector<Coefficient>& theta, const BipartiteNetwork& net,
                       const std::vector<std::vector<FileId>>& y)
{
    double total = 0.0;
    for (const auto& c : theta) {
        if (c.value <= 0)
            continue;
        int cover = 0;
        for (CacheId j : net.user_caches(c.user))
            cover += std::count(y[j].begin(), y[j].end(), c.file) > 0;
        total += c.value * std::min(1, cover);
    }
    return total;
}

struct BruteForce {
    double value = -1.0;
    std::vector<std::vector<FileId>> best;
};

// Enumerates every placement of min(C, N) files per cache over [0, N).
inline BruteForce brute_force(const std::vector<Coefficient>& theta, const BipartiteNetwork& net,
                              int C, int N)
{
    const auto subs = subsets(N, std::min(C, N));
    const int m = net.num_caches();
    std::vector<std::size_t> idx(m, 0);
    BruteForce out;
    std::vector<std::vector<FileId>> y(m);
    while (true) {
        for (int j = 0; j < m; ++j)
            y[j] = subs[idx[j]];
        const double v = value_of(theta, net, y);
        if (v > out.value + 1e-9) {
            out.value = v;
            out.best = y;
        }
        int j = m - 1;
        while (j >= 0 && ++idx[j] == subs.size())
            idx[j--] = 0;
        if (j < 0)
            break;
    }
    return out;
}

inline BipartiteNetwork random_network(int n, int m, std::mt19937_64& rng, double p = 0.6)
{
    std::vector<BipartiteNetwork::Edge> edges;
    std::bernoulli_distribution keep(p);
    for (int j = 0; j < m; ++j) {
        bool any = false;
        for (int i = 0; i < n; ++i)
            if (keep(rng)) {
                edges.emplace_back(j, i);
                any = true;
            }
        if (!any)
            edges.emplace_back(j, static_cast<int>(rng() % n));
    }
    return BipartiteNetwork(n, m, edges);
}

inline std::vector<Coefficient> random_theta(int n, int N, std::mt19937_64& rng, double density = 0.7)
{
    std::vector<Coefficient> theta;
    std::uniform_real_distribution<double> val(0.1, 5.0);
    std::bernoulli_distribution keep(density);
    for (int i = 0; i < n; ++i)
        for (int f = 0; f < N; ++f)
            if (keep(rng))
                theta.push_back({i, f, val(rng)});
    return theta;
}

inline CacheConfiguration to_config(const std::vector<std::vector<FileId>>& y, int C)
{
    CacheConfiguration out(static_cast<int>(y.size()), C);
    for (std::size_t j = 0; j < y.size(); ++j)
        out.assign(static_cast<CacheId>(j), y[j]);
    return out;
}

}  // namespace testutil
