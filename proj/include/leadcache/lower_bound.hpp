#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "leadcache/network.hpp"
#include "leadcache/requests.hpp"
#include "leadcache/reward.hpp"

namespace leadcache {

// Total requests per file over the trace (size N).
std::vector<double> file_totals(const RequestTrace& trace);

// Colors relabeled by how many caches carry them (most common first, ties by
// original color), files sorted by descending total (ties by id) and cut
// into 2*chi segments of C files; a cache of color rank r gets segment r.
// Requires N = 2 chi C.
CacheConfiguration build_y_perp(const BipartiteNetwork& net, const CacheColoring& coloring,
                                std::span<const double> file_counts, int capacity);

// Mean load of the `top` fullest of `bins` bins after `balls` uniform throws.
double mean_top_bins_load(int bins, int top, std::int64_t balls, std::int64_t trials,
                          std::uint64_t seed, bool parallel = true);

// T/2 + sqrt(C T / 2pi): leading terms for the top C of 2C bins.
double top_half_load_estimate(int capacity, std::int64_t balls);

}  // namespace leadcache
