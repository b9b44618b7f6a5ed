#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace leadcache {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Counter-based seed derivation: the same (seed, keys...) always maps to the
// same value, independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept;

// Uniform in [0, 1) from a 64-bit hash.
double hash_to_unit(std::uint64_t h) noexcept;

// Standard normal sample addressed by (seed, keys...). Box-Muller over two
// derived uniforms.
double hashed_normal(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept;

inline Rng make_rng(std::uint64_t seed) { return Rng{splitmix64(seed)}; }

}  // namespace leadcache
