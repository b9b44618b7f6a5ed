#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "leadcache/network.hpp"
#include "leadcache/requests.hpp"
#include "leadcache/reward.hpp"

namespace leadcache {

enum class EvictionRule { lru, lfu, belady };

// all: a request reaches every connected cache. single: only the lowest-id
// connected cache sees it.
enum class FanOut { all, single };

std::string to_string(EvictionRule r);
EvictionRule parse_eviction_rule(const std::string& s);

// Per-cache reactive state. Requests are processed in ascending user order
// within a slot; user hits are decided on the pre-slot contents.
class ReactiveCaches {
public:
    ReactiveCaches(const BipartiteNetwork& net, int capacity, EvictionRule rule,
                   FanOut fanout = FanOut::all);
    // Belady needs the future; other rules ignore the trace.
    ReactiveCaches(const BipartiteNetwork& net, int capacity, EvictionRule rule,
                   const RequestTrace& trace, FanOut fanout = FanOut::all);

    struct StepResult {
        int hits = 0;
        int fetches = 0;
    };
    StepResult step(std::span<const FileId> slot);

    CacheConfiguration configuration() const;
    // Hits of each cache on its own merged request stream.
    const std::vector<std::int64_t>& cache_hits() const noexcept { return cache_hits_; }
    std::size_t slots_seen() const noexcept { return t_; }

private:
    struct Cache {
        std::vector<FileId> files;
        std::unordered_map<FileId, std::size_t> stamp;      // lru: last slot used
        std::unordered_map<FileId, std::int64_t> freq;      // lfu: requests seen
        std::unordered_map<FileId, std::size_t> next_use;   // belady
        std::size_t pos = 0;                                // belady stream position
    };

    bool holds(const Cache& c, FileId f) const;
    void access(CacheId j, FileId f, bool& fetched, bool& hit);
    FileId victim(const Cache& c) const;
    void build_next_use(const RequestTrace& trace);
    std::vector<CacheId> targets(UserId i) const;

    const BipartiteNetwork* net_;
    int capacity_;
    EvictionRule rule_;
    FanOut fanout_;
    std::size_t t_ = 0;
    std::vector<Cache> caches_;
    std::vector<std::vector<std::size_t>> next_;  // per cache: next position of same file
    std::vector<std::int64_t> cache_hits_;
};

struct BaselineResult {
    std::vector<int> hits;
    std::vector<int> fetches;
    std::vector<std::int64_t> cache_hits;
};

BaselineResult run_reactive(const BipartiteNetwork& net, const RequestTrace& trace, int capacity,
                            EvictionRule rule, FanOut fanout = FanOut::all);

inline BaselineResult belady_offline(const BipartiteNetwork& net, const RequestTrace& trace,
                                     int capacity, FanOut fanout = FanOut::all)
{
    return run_reactive(net, trace, capacity, EvictionRule::belady, fanout);
}

}  // namespace leadcache
