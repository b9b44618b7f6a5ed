#include "leadcache/random.hpp"

#include <cmath>
#include <numbers>

namespace leadcache {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept
{
    std::uint64_t h = splitmix64(seed);
    for (auto k : keys)
        h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    return h;
}

double hash_to_unit(std::uint64_t h) noexcept
{
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double hashed_normal(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept
{
    const std::uint64_t h = derive_seed(seed, keys);
    // u1 in (0, 1] keeps the log finite.
    const double u1 = 1.0 - hash_to_unit(splitmix64(h));
    const double u2 = hash_to_unit(splitmix64(h ^ 0xd1b54a32d192ed03ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace leadcache
