#pragma once

#include <span>
#include <vector>

#include "leadcache/coefficients.hpp"
#include "leadcache/network.hpp"
#include "leadcache/requests.hpp"

namespace leadcache {

// Integral placement: per cache a sorted set of at most C file ids.
class CacheConfiguration {
public:
    CacheConfiguration() = default;
    CacheConfiguration(int num_caches, int capacity);

    int num_caches() const noexcept { return static_cast<int>(files_.size()); }
    int capacity() const noexcept { return capacity_; }

    std::span<const FileId> files(CacheId j) const { return files_[j]; }
    bool holds(CacheId j, FileId f) const;

    // Replaces cache j's contents; sorts and rejects duplicates or overflow.
    void assign(CacheId j, std::vector<FileId> files);

    // Every cache within capacity, ids in [0, catalog).
    bool feasible(int catalog_size) const;

    // Lexicographic order on the flattened per-cache sorted lists.
    friend auto operator<=>(const CacheConfiguration& a, const CacheConfiguration& b)
    {
        return a.files_ <=> b.files_;
    }
    friend bool operator==(const CacheConfiguration&, const CacheConfiguration&) = default;

private:
    int capacity_ = 0;
    std::vector<std::vector<FileId>> files_;
};

// Sparse binary virtual action: the (user, file) pairs set to one, sorted.
struct VirtualAction {
    std::vector<std::pair<UserId, FileId>> ones;

    bool contains(UserId i, FileId f) const;
};

// Users whose request is held by at least one connected cache.
int reward(const BipartiteNetwork& net, std::span<const FileId> slot, const CacheConfiguration& y);

// Sum over users of the number of connected caches holding their request.
int linear_reward(const BipartiteNetwork& net, std::span<const FileId> slot,
                  const CacheConfiguration& y);

// <x_t, z_t>.
int virtual_reward(std::span<const FileId> slot, const VirtualAction& z);

// No file duplicated among the caches of any single user's neighborhood.
bool locally_exclusive(const BipartiteNetwork& net, const CacheConfiguration& y);

// Per-(user, file) cumulative request counts over the whole trace, sparse and
// sorted by (user, file).
std::vector<Coefficient> cumulative_counts(const RequestTrace& trace);

// Z = OR of the configuration over each user's neighborhood.
VirtualAction covered_pairs(const BipartiteNetwork& net, const CacheConfiguration& y,
                            std::span<const Coefficient> restrict_to = {});

struct HindsightResult {
    CacheConfiguration config;
    double value = 0.0;
};

// Exact best static configuration for the whole trace. Refuses when
// C(N, C)^m exceeds the budget.
HindsightResult hindsight_opt_exact(const BipartiteNetwork& net, const RequestTrace& trace,
                                    int capacity, double budget = 1e6);

// LP relaxation value with theta = cumulative counts: an upper bound on the
// exact hindsight value.
double hindsight_upper_bound(const BipartiteNetwork& net, const RequestTrace& trace, int capacity);

// R(t) = alpha * OPT(t) - sum_{tau <= t} hits(tau), with opt[t] the hindsight
// value of the first t+1 slots.
std::vector<double> regret_series(std::span<const double> hits, std::span<const double> opt,
                                  double alpha = 1.0);

double regret(double total_hits, double opt, double alpha = 1.0);

// Files newly loaded across all caches, and whether anything changed.
int fetch_count(const CacheConfiguration& prev, const CacheConfiguration& next);
bool fetch_event(const CacheConfiguration& prev, const CacheConfiguration& next);

double hit_rate(double hits, int num_users, std::size_t slots);
double fetch_rate(double fetches, int num_caches, std::size_t slots);

}  // namespace leadcache
