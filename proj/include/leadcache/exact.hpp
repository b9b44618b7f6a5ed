#pragma once

#include <span>

#include "leadcache/coefficients.hpp"
#include "leadcache/network.hpp"
#include "leadcache/reward.hpp"

namespace leadcache {

struct ExactResult {
    CacheConfiguration config;
    double value = 0.0;       // L(y)
    std::size_t nodes = 0;    // search nodes visited
};

// Number of candidate configurations, C(s, min(C, s))^m, as a double.
double configuration_count(std::size_t candidates, int capacity, int num_caches);

// Exact maximizer of L(y) = sum theta+ min(1, sum_{j in N(i)} y^j_f) over
// integral placements drawn from `candidates` (default: files with positive
// weight). Each cache holds min(C, |candidates|) files. Among optima the
// lexicographically smallest configuration wins. Branch and bound over caches
// in id order with a submodular (coverage-aware top-C) bound; refuses when
// the enumeration count exceeds `budget`.
ExactResult exact_ilp(std::span<const Coefficient> theta, const BipartiteNetwork& net,
                      int capacity, double budget, std::span<const FileId> candidates = {});

// L(y) of an integral configuration, evaluated term by term.
double placement_value(std::span<const Coefficient> theta, const BipartiteNetwork& net,
                       const CacheConfiguration& y);

}  // namespace leadcache
