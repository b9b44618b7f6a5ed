#include "leadcache/lower_bound.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "leadcache/kernels.hpp"

namespace leadcache {

std::vector<double> file_totals(const RequestTrace& trace)
{
    std::vector<double> out(static_cast<std::size_t>(trace.catalog_size()), 0.0);
    for (std::size_t t = 0; t < trace.length(); ++t)
        for (FileId f : trace.slot(t))
            if (f != kNoRequest)
                out[f] += 1.0;
    return out;
}

CacheConfiguration build_y_perp(const BipartiteNetwork& net, const CacheColoring& coloring,
                                std::span<const double> file_counts, int capacity)
{
    const int chi = coloring.chi;
    const auto N = static_cast<long>(file_counts.size());
    if (capacity < 1 || chi < 1 || N != 2L * chi * capacity)
        throw DimensionError("build_y_perp: catalog size " + std::to_string(N) +
                             " must equal 2 * chi * C = " + std::to_string(2L * chi * capacity));
    if (static_cast<int>(coloring.colors.size()) != net.num_caches())
        throw DimensionError("build_y_perp: coloring does not cover every cache");

    std::vector<int> freq(chi, 0);
    for (int c : coloring.colors) {
        if (c < 0 || c >= chi)
            throw InvalidArgument("build_y_perp: color out of range");
        ++freq[c];
    }
    std::vector<int> colors(chi);
    std::iota(colors.begin(), colors.end(), 0);
    std::stable_sort(colors.begin(), colors.end(),
                     [&](int a, int b) { return freq[a] > freq[b]; });
    std::vector<int> rank(chi);
    for (int r = 0; r < chi; ++r)
        rank[colors[r]] = r;

    std::vector<FileId> v(N);
    std::iota(v.begin(), v.end(), FileId{0});
    std::stable_sort(v.begin(), v.end(),
                     [&](FileId a, FileId b) { return file_counts[a] > file_counts[b]; });

    CacheConfiguration y(net.num_caches(), capacity);
    for (CacheId j = 0; j < net.num_caches(); ++j) {
        const int r = rank[coloring.colors[j]];
        y.assign(j, std::vector<FileId>(v.begin() + r * capacity, v.begin() + (r + 1) * capacity));
    }
    return y;
}

double mean_top_bins_load(int bins, int top, std::int64_t balls, std::int64_t trials,
                          std::uint64_t seed, bool parallel)
{
    if (bins < 1 || top < 0 || top > bins || balls < 0 || trials < 1)
        throw InvalidArgument("mean_top_bins_load: bad dimensions");
    const auto loads = parallel ? kernels::parallel::top_bins_load(bins, top, balls, trials, seed)
                                : kernels::serial::top_bins_load(bins, top, balls, trials, seed);
    const auto total = std::accumulate(loads.begin(), loads.end(), std::int64_t{0});
    return static_cast<double>(total) / static_cast<double>(trials);
}

double top_half_load_estimate(int capacity, std::int64_t balls)
{
    const double t = static_cast<double>(balls);
    return t / 2.0 + std::sqrt(capacity * t / (2.0 * std::numbers::pi));
}

}  // namespace leadcache
