#include "leadcache/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "leadcache/policy.hpp"
#include "leadcache/rounding.hpp"

namespace leadcache {

double upper_bound(int n, int m, int C, int d, int N, std::size_t T)
{
    const double lead = eta(T + 1, n, m, C, d, N, RateMode::integral) * m * C *
                        std::sqrt(2.0 * d * (std::log(double(N) / C) + 1.0));
    double inv = 0.0;
    for (std::size_t t = 1; t <= T; ++t)
        inv += 1.0 / eta(t, n, m, C, d, N, RateMode::integral);
    return lead + 0.5 * std::pow(n, 1.5) * inv;
}

double lower_bound(int n, int m, int C, int d, double t)
{
    const double two_pi = 2.0 * std::numbers::pi;
    return std::max(std::sqrt(double(m) * n * C * t / two_pi), d * std::sqrt(double(m) * C * t / two_pi));
}

BoundReport bound_report(const BipartiteNetwork& net, int capacity, int catalog_size,
                         std::size_t T)
{
    BoundReport r;
    const int d = std::max(1, net.max_cache_degree());
    r.upper_bound = upper_bound(net.num_users(), net.num_caches(), capacity, d, catalog_size, T);
    r.lower_bound = lower_bound(net.num_users(), net.num_caches(), capacity, d, static_cast<double>(T));
    r.alpha = approximation_factor(net.max_user_degree());
    return r;
}

}  // namespace leadcache
