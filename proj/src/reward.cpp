#include "leadcache/reward.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "leadcache/exact.hpp"
#include "leadcache/lp.hpp"

namespace leadcache {

CacheConfiguration::CacheConfiguration(int num_caches, int capacity)
    : capacity_(capacity), files_(num_caches)
{
    if (num_caches < 0 || capacity < 0)
        throw InvalidArgument("CacheConfiguration: negative size");
}

bool CacheConfiguration::holds(CacheId j, FileId f) const
{
    const auto& v = files_[j];
    return std::binary_search(v.begin(), v.end(), f);
}

void CacheConfiguration::assign(CacheId j, std::vector<FileId> files)
{
    if (j < 0 || j >= num_caches())
        throw InvalidArgument("CacheConfiguration: cache out of range");
    std::sort(files.begin(), files.end());
    if (std::adjacent_find(files.begin(), files.end()) != files.end())
        throw InvalidArgument("CacheConfiguration: duplicate file in cache " + std::to_string(j));
    if (static_cast<int>(files.size()) > capacity_)
        throw InvalidArgument("CacheConfiguration: cache " + std::to_string(j) +
                              " over capacity");
    files_[j] = std::move(files);
}

bool CacheConfiguration::feasible(int catalog_size) const
{
    for (const auto& v : files_) {
        if (static_cast<int>(v.size()) > capacity_)
            return false;
        for (FileId f : v)
            if (f < 0 || f >= catalog_size)
                return false;
    }
    return true;
}

bool VirtualAction::contains(UserId i, FileId f) const
{
    return std::binary_search(ones.begin(), ones.end(), std::pair{i, f});
}

int reward(const BipartiteNetwork& net, std::span<const FileId> slot, const CacheConfiguration& y)
{
    int hits = 0;
    for (UserId i = 0; i < net.num_users(); ++i) {
        const FileId f = slot[i];
        if (f == kNoRequest)
            continue;
        for (CacheId j : net.user_caches(i))
            if (y.holds(j, f)) {
                ++hits;
                break;
            }
    }
    return hits;
}

int linear_reward(const BipartiteNetwork& net, std::span<const FileId> slot,
                  const CacheConfiguration& y)
{
    int total = 0;
    for (UserId i = 0; i < net.num_users(); ++i) {
        const FileId f = slot[i];
        if (f == kNoRequest)
            continue;
        for (CacheId j : net.user_caches(i))
            total += y.holds(j, f) ? 1 : 0;
    }
    return total;
}

int virtual_reward(std::span<const FileId> slot, const VirtualAction& z)
{
    int total = 0;
    for (std::size_t i = 0; i < slot.size(); ++i)
        if (slot[i] != kNoRequest && z.contains(static_cast<UserId>(i), slot[i]))
            ++total;
    return total;
}

bool locally_exclusive(const BipartiteNetwork& net, const CacheConfiguration& y)
{
    std::vector<FileId> seen;
    for (UserId i = 0; i < net.num_users(); ++i) {
        seen.clear();
        for (CacheId j : net.user_caches(i)) {
            auto fs = y.files(j);
            seen.insert(seen.end(), fs.begin(), fs.end());
        }
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
            return false;
    }
    return true;
}

std::vector<Coefficient> cumulative_counts(const RequestTrace& trace)
{
    std::map<std::pair<UserId, FileId>, double> counts;
    for (std::size_t t = 0; t < trace.length(); ++t) {
        auto s = trace.slot(t);
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] != kNoRequest)
                counts[{static_cast<UserId>(i), s[i]}] += 1.0;
    }
    std::vector<Coefficient> out;
    out.reserve(counts.size());
    for (const auto& [k, v] : counts)
        out.push_back({k.first, k.second, v});
    return out;
}

VirtualAction covered_pairs(const BipartiteNetwork& net, const CacheConfiguration& y,
                            std::span<const Coefficient> restrict_to)
{
    VirtualAction z;
    if (!restrict_to.empty()) {
        for (const auto& c : restrict_to)
            for (CacheId j : net.user_caches(c.user))
                if (y.holds(j, c.file)) {
                    z.ones.emplace_back(c.user, c.file);
                    break;
                }
    } else {
        std::vector<FileId> seen;
        for (UserId i = 0; i < net.num_users(); ++i) {
            seen.clear();
            for (CacheId j : net.user_caches(i)) {
                auto fs = y.files(j);
                seen.insert(seen.end(), fs.begin(), fs.end());
            }
            std::sort(seen.begin(), seen.end());
            seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
            for (FileId f : seen)
                z.ones.emplace_back(i, f);
        }
    }
    std::sort(z.ones.begin(), z.ones.end());
    z.ones.erase(std::unique(z.ones.begin(), z.ones.end()), z.ones.end());
    return z;
}

HindsightResult hindsight_opt_exact(const BipartiteNetwork& net, const RequestTrace& trace,
                                    int capacity, double budget)
{
    std::vector<FileId> catalog(static_cast<std::size_t>(trace.catalog_size()));
    std::iota(catalog.begin(), catalog.end(), FileId{0});
    const auto counts = cumulative_counts(trace);
    auto res = exact_ilp(counts, net, capacity, budget, catalog);
    return {std::move(res.config), res.value};
}

double hindsight_upper_bound(const BipartiteNetwork& net, const RequestTrace& trace, int capacity)
{
    const auto counts = cumulative_counts(trace);
    if (counts.empty())
        return 0.0;
    return solve_lp(build_lp(counts, net, capacity)).objective;
}

std::vector<double> regret_series(std::span<const double> hits, std::span<const double> opt,
                                  double alpha)
{
    if (hits.size() != opt.size())
        throw InvalidArgument("regret_series: length mismatch");
    std::vector<double> out(hits.size());
    double cum = 0.0;
    for (std::size_t t = 0; t < hits.size(); ++t) {
        cum += hits[t];
        out[t] = alpha * opt[t] - cum;
    }
    return out;
}

double regret(double total_hits, double opt, double alpha) { return alpha * opt - total_hits; }

int fetch_count(const CacheConfiguration& prev, const CacheConfiguration& next)
{
    if (prev.num_caches() == 0)
        return 0;
    if (prev.num_caches() != next.num_caches())
        throw InvalidArgument("fetch_count: cache count mismatch");
    int total = 0;
    for (CacheId j = 0; j < next.num_caches(); ++j) {
        auto a = prev.files(j);
        auto b = next.files(j);
        std::vector<FileId> diff;
        std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(diff));
        total += static_cast<int>(diff.size());
    }
    return total;
}

bool fetch_event(const CacheConfiguration& prev, const CacheConfiguration& next)
{
    return fetch_count(prev, next) > 0;
}

double hit_rate(double hits, int num_users, std::size_t slots)
{
    if (slots == 0 || num_users == 0)
        return 0.0;
    return hits / (static_cast<double>(num_users) * static_cast<double>(slots));
}

double fetch_rate(double fetches, int num_caches, std::size_t slots)
{
    if (slots == 0 || num_caches == 0)
        return 0.0;
    return fetches / (static_cast<double>(num_caches) * static_cast<double>(slots));
}

}  // namespace leadcache
