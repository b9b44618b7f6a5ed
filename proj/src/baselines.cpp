#include "leadcache/baselines.hpp"

#include <algorithm>
#include <limits>

namespace leadcache {

namespace {
constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
}

std::string to_string(EvictionRule r)
{
    switch (r) {
    case EvictionRule::lru: return "lru";
    case EvictionRule::lfu: return "lfu";
    case EvictionRule::belady: return "belady";
    }
    return "?";
}

EvictionRule parse_eviction_rule(const std::string& s)
{
    if (s == "lru") return EvictionRule::lru;
    if (s == "lfu") return EvictionRule::lfu;
    if (s == "belady") return EvictionRule::belady;
    throw ConfigError("unknown eviction rule '" + s + "'");
}

ReactiveCaches::ReactiveCaches(const BipartiteNetwork& net, int capacity, EvictionRule rule,
                               FanOut fanout)
    : net_(&net), capacity_(capacity), rule_(rule), fanout_(fanout), caches_(net.num_caches()),
      cache_hits_(net.num_caches(), 0)
{
    if (capacity < 1)
        throw InvalidArgument("ReactiveCaches: capacity must be >= 1");
    if (rule == EvictionRule::belady)
        throw InvalidArgument("ReactiveCaches: belady needs the full trace");
}

ReactiveCaches::ReactiveCaches(const BipartiteNetwork& net, int capacity, EvictionRule rule,
                               const RequestTrace& trace, FanOut fanout)
    : net_(&net), capacity_(capacity), rule_(rule), fanout_(fanout), caches_(net.num_caches()),
      cache_hits_(net.num_caches(), 0)
{
    if (capacity < 1)
        throw InvalidArgument("ReactiveCaches: capacity must be >= 1");
    if (rule == EvictionRule::belady)
        build_next_use(trace);
}

std::vector<CacheId> ReactiveCaches::targets(UserId i) const
{
    auto cs = net_->user_caches(i);
    if (cs.empty())
        return {};
    if (fanout_ == FanOut::single)
        return {cs.front()};
    return {cs.begin(), cs.end()};
}

void ReactiveCaches::build_next_use(const RequestTrace& trace)
{
    const int m = net_->num_caches();
    std::vector<std::vector<FileId>> stream(m);
    for (std::size_t t = 0; t < trace.length(); ++t) {
        auto s = trace.slot(t);
        for (UserId i = 0; i < static_cast<UserId>(s.size()); ++i)
            if (s[i] != kNoRequest)
                for (CacheId j : targets(i))
                    stream[j].push_back(s[i]);
    }
    next_.assign(m, {});
    for (CacheId j = 0; j < m; ++j) {
        const auto& st = stream[j];
        next_[j].assign(st.size(), kNever);
        std::unordered_map<FileId, std::size_t> last;
        for (std::size_t p = st.size(); p-- > 0;) {
            auto it = last.find(st[p]);
            if (it != last.end())
                next_[j][p] = it->second;
            last[st[p]] = p;
        }
    }
}

bool ReactiveCaches::holds(const Cache& c, FileId f) const
{
    return std::find(c.files.begin(), c.files.end(), f) != c.files.end();
}

FileId ReactiveCaches::victim(const Cache& c) const
{
    FileId best = c.files.front();
    auto worse = [&](FileId a, FileId b) {  // is a a better victim than b
        switch (rule_) {
        case EvictionRule::lru: {
            const auto sa = c.stamp.at(a), sb = c.stamp.at(b);
            return sa != sb ? sa < sb : a < b;
        }
        case EvictionRule::lfu: {
            const auto fa = c.freq.at(a), fb = c.freq.at(b);
            return fa != fb ? fa < fb : a < b;
        }
        case EvictionRule::belady: {
            const auto na = c.next_use.at(a), nb = c.next_use.at(b);
            return na != nb ? na > nb : a < b;
        }
        }
        return false;
    };
    for (FileId f : c.files)
        if (worse(f, best))
            best = f;
    return best;
}

void ReactiveCaches::access(CacheId j, FileId f, bool& fetched, bool& hit)
{
    Cache& c = caches_[j];
    hit = holds(c, f);
    fetched = false;
    if (rule_ == EvictionRule::belady) {
        if (c.pos >= next_[j].size())
            throw InvalidArgument("ReactiveCaches: trace longer than the one Belady was built on");
        c.next_use[f] = next_[j][c.pos++];
    }
    c.stamp[f] = t_;
    ++c.freq[f];
    if (hit) {
        ++cache_hits_[j];
        return;
    }
    if (static_cast<int>(c.files.size()) >= capacity_) {
        const FileId out = victim(c);
        c.files.erase(std::find(c.files.begin(), c.files.end(), out));
    }
    c.files.push_back(f);
    fetched = true;
}

ReactiveCaches::StepResult ReactiveCaches::step(std::span<const FileId> slot)
{
    StepResult r;
    for (UserId i = 0; i < static_cast<UserId>(slot.size()); ++i) {
        const FileId f = slot[i];
        if (f == kNoRequest)
            continue;
        for (CacheId j : net_->user_caches(i))
            if (holds(caches_[j], f)) {
                ++r.hits;
                break;
            }
    }
    for (UserId i = 0; i < static_cast<UserId>(slot.size()); ++i) {
        const FileId f = slot[i];
        if (f == kNoRequest)
            continue;
        for (CacheId j : targets(i)) {
            bool fetched = false, hit = false;
            access(j, f, fetched, hit);
            r.fetches += fetched ? 1 : 0;
        }
    }
    ++t_;
    return r;
}

CacheConfiguration ReactiveCaches::configuration() const
{
    CacheConfiguration out(static_cast<int>(caches_.size()), capacity_);
    for (CacheId j = 0; j < static_cast<CacheId>(caches_.size()); ++j)
        out.assign(j, caches_[j].files);
    return out;
}

BaselineResult run_reactive(const BipartiteNetwork& net, const RequestTrace& trace, int capacity,
                            EvictionRule rule, FanOut fanout)
{
    if (trace.num_users() != net.num_users())
        throw InvalidArgument("run_reactive: trace and network disagree on the number of users");
    ReactiveCaches caches(net, capacity, rule, trace, fanout);
    BaselineResult out;
    out.hits.reserve(trace.length());
    out.fetches.reserve(trace.length());
    for (std::size_t t = 0; t < trace.length(); ++t) {
        const auto r = caches.step(trace.slot(t));
        out.hits.push_back(r.hits);
        out.fetches.push_back(r.fetches);
    }
    out.cache_hits = caches.cache_hits();
    return out;
}

}  // namespace leadcache
