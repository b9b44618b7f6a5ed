#include "leadcache/policy.hpp"

#include <algorithm>
#include <cmath>

#include "leadcache/exact.hpp"
#include "leadcache/random.hpp"
#include "leadcache/rounding.hpp"

namespace leadcache {

std::string to_string(RoundingMode m)
{
    switch (m) {
    case RoundingMode::exact: return "exact";
    case RoundingMode::pipage: return "pipage";
    case RoundingMode::madow: return "madow";
    case RoundingMode::replacement: return "replacement";
    }
    return "?";
}

std::string to_string(GammaMode m) { return m == GammaMode::fixed ? "fixed" : "fresh"; }
std::string to_string(RateMode m) { return m == RateMode::integral ? "integral" : "relaxed"; }

RoundingMode parse_rounding_mode(const std::string& s)
{
    if (s == "exact") return RoundingMode::exact;
    if (s == "pipage") return RoundingMode::pipage;
    if (s == "madow") return RoundingMode::madow;
    if (s == "replacement") return RoundingMode::replacement;
    throw ConfigError("unknown rounding mode '" + s + "'");
}

GammaMode parse_gamma_mode(const std::string& s)
{
    if (s == "fixed") return GammaMode::fixed;
    if (s == "fresh") return GammaMode::fresh;
    throw ConfigError("unknown gamma mode '" + s + "'");
}

RateMode parse_rate_mode(const std::string& s)
{
    if (s == "integral") return RateMode::integral;
    if (s == "relaxed") return RateMode::relaxed;
    throw ConfigError("unknown rate mode '" + s + "'");
}

double eta(std::size_t t, int n, int m, int C, int d, int N, RateMode rate)
{
    if (t < 1 || C < 1 || N < C || n < 1 || m < 1 || d < 1)
        throw InvalidArgument("eta: requires t >= 1, N >= C >= 1 and positive n, m, d");
    const double tt = static_cast<double>(t);
    if (rate == RateMode::integral)
        return std::pow(n, 0.75) * std::pow(2.0 * d * (std::log(double(N) / C) + 1.0), -0.25) *
               std::sqrt(tt / (double(C) * m));
    const double lg = std::log(double(N) * n);
    if (lg <= 0.0)
        throw InvalidArgument("eta: relaxed rate needs N * n > 1");
    return std::pow(n, 0.75) * std::sqrt(tt) /
           (std::sqrt(double(m) * C * d) * std::pow(4.0 * lg, 0.25));
}

PolicyState::PolicyState(const BipartiteNetwork& net, int catalog_size, int capacity,
                         PolicyOptions options)
    : net_(&net), catalog_(catalog_size), capacity_(capacity), opt_(options)
{
    if (capacity_ < 1)
        throw InvalidArgument("PolicyState: capacity must be >= 1");
    if (catalog_ < capacity_)
        throw InvalidArgument("PolicyState: catalog smaller than capacity");
    if (opt_.noise_files_per_user < 0)
        throw InvalidArgument("PolicyState: negative noise file count");
}

PolicyState::~PolicyState() = default;
PolicyState::PolicyState(PolicyState&&) noexcept = default;

void PolicyState::observe(std::span<const FileId> slot)
{
    for (std::size_t i = 0; i < slot.size(); ++i) {
        const FileId f = slot[i];
        if (f == kNoRequest)
            continue;
        if (f < 0 || f >= catalog_)
            throw InvalidArgument("PolicyState: request outside the catalog");
        ++counts_[{static_cast<UserId>(i), f}];
    }
    ++t_;
}

int PolicyState::count(UserId i, FileId f) const
{
    auto it = counts_.find({i, f});
    return it == counts_.end() ? 0 : it->second;
}

double PolicyState::gamma(UserId i, FileId f, std::size_t slot) const
{
    if (opt_.gamma == GammaMode::fixed)
        return hashed_normal(opt_.seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(f)});
    return hashed_normal(opt_.seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(f),
                                     static_cast<std::uint64_t>(slot)});
}

double PolicyState::current_eta() const
{
    return eta(t_ + 1, net_->num_users(), net_->num_caches(), capacity_,
               std::max(1, net_->max_cache_degree()), catalog_, opt_.rate);
}

std::vector<std::pair<UserId, FileId>> PolicyState::support() const
{
    std::vector<std::pair<UserId, FileId>> out;
    const int n = net_->num_users();
    if (opt_.exact_support) {
        for (UserId i = 0; i < n; ++i)
            for (FileId f = 0; f < catalog_; ++f)
                out.emplace_back(i, f);
        return out;
    }
    for (const auto& [key, c] : counts_)
        out.push_back(key);
    if (opt_.noise_files_per_user > 0) {
        for (UserId i = 0; i < n; ++i) {
            int added = 0;
            for (FileId f = 0; f < catalog_ && added < opt_.noise_files_per_user; ++f)
                if (!counts_.count({i, f})) {
                    out.emplace_back(i, f);
                    ++added;
                }
        }
        std::sort(out.begin(), out.end());
    }
    return out;
}

std::vector<Coefficient> PolicyState::perturbed_counts() const
{
    const double e = current_eta();
    std::vector<Coefficient> theta;
    for (const auto& [i, f] : support())
        theta.push_back({i, f, count(i, f) + e * gamma(i, f, t_ + 1)});
    return theta;
}

Decision PolicyState::decide()
{
    auto theta = perturbed_counts();
    std::vector<Coefficient> plus;
    for (const auto& c : theta)
        if (c.value > 0.0)
            plus.push_back(c);

    Decision out;
    if (opt_.mode == RoundingMode::exact) {
        out.config = exact_ilp(plus, *net_, capacity_, opt_.exact_budget).config;
        out.z = covered_pairs(*net_, out.config, plus);
        return out;
    }

    if (!lp_) {
        std::vector<std::vector<CacheId>> adj(net_->num_users());
        for (UserId i = 0; i < net_->num_users(); ++i) {
            auto cs = net_->user_caches(i);
            adj[i].assign(cs.begin(), cs.end());
        }
        LpOptions lo;
        lo.parallel = opt_.parallel_lp;
        lp_ = std::make_unique<LpSolver>(net_->num_users(), net_->num_caches(), capacity_,
                                         std::move(adj), lo);
    }
    // Pairs stay in the LP once present; leaving the support zeroes the cost.
    for (const auto& [i, f] : lp_->pairs())
        lp_->set_coefficient(i, f, 0.0);
    for (const auto& c : plus) {
        if (lp_->has_pair(c.user, c.file))
            lp_->set_coefficient(c.user, c.file, c.value);
        else
            lp_->add_pair(c.user, c.file, c.value);
    }
    const FractionalAllocation frac = lp_->solve();
    const std::uint64_t slot_seed =
        derive_seed(opt_.seed, {0x726f756e64ULL, static_cast<std::uint64_t>(t_ + 1)});
    switch (opt_.mode) {
    case RoundingMode::pipage: {
        SurrogateEvaluator eval(plus, *net_);
        out.config = pipage_round(frac, eval);
        out.z = covered_pairs(*net_, out.config, plus);
        break;
    }
    case RoundingMode::madow: {
        auto r = madow_round(frac, *net_, slot_seed);
        out.config = std::move(r.config);
        out.z = std::move(r.z);
        break;
    }
    case RoundingMode::replacement: {
        auto r = replacement_round(frac, *net_, slot_seed);
        out.config = std::move(r.config);
        out.z = std::move(r.z);
        break;
    }
    case RoundingMode::exact:
        break;
    }
    return out;
}

RunResult run_policy(const BipartiteNetwork& net, const RequestTrace& trace, int capacity,
                     const PolicyOptions& options, bool keep_configs)
{
    if (trace.num_users() != net.num_users())
        throw InvalidArgument("run_policy: trace and network disagree on the number of users");
    RunResult out;
    const std::size_t T = trace.length();
    if (T == 0)
        return out;
    PolicyState state(net, trace.catalog_size(), capacity, options);
    CacheConfiguration prev(net.num_caches(), capacity);
    out.hits.reserve(T);
    out.fetches.reserve(T);
    out.virtual_hits.reserve(T);
    for (std::size_t t = 0; t < T; ++t) {
        Decision d = state.decide();
        const auto slot = trace.slot(t);
        out.hits.push_back(reward(net, slot, d.config));
        out.fetches.push_back(fetch_count(prev, d.config));
        out.virtual_hits.push_back(virtual_reward(slot, d.z));
        state.observe(slot);
        if (keep_configs)
            out.configs.push_back(d.config);
        prev = std::move(d.config);
    }
    return out;
}

}  // namespace leadcache
