#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leadcache/coefficients.hpp"
#include "leadcache/lp.hpp"
#include "leadcache/network.hpp"
#include "leadcache/requests.hpp"
#include "leadcache/reward.hpp"

namespace leadcache {

enum class RoundingMode { exact, pipage, madow, replacement };
enum class GammaMode { fixed, fresh };
enum class RateMode { integral, relaxed };

std::string to_string(RoundingMode m);
std::string to_string(GammaMode m);
std::string to_string(RateMode m);
RoundingMode parse_rounding_mode(const std::string& s);
GammaMode parse_gamma_mode(const std::string& s);
RateMode parse_rate_mode(const std::string& s);

// integral: n^{3/4} (2d(ln(N/C)+1))^{-1/4} sqrt(t/(Cm))
// relaxed:  n^{3/4} sqrt(t) / ((mCd)^{1/2} (4 ln(Nn))^{1/4})
double eta(std::size_t t, int n, int m, int C, int d, int N, RateMode rate);

struct PolicyOptions {
    RoundingMode mode = RoundingMode::pipage;
    GammaMode gamma = GammaMode::fixed;
    RateMode rate = RateMode::integral;
    std::uint64_t seed = 0;
    // Perturb the whole catalog for every user instead of the requested pairs.
    bool exact_support = false;
    // Extra never-requested files (lowest ids) per user carrying pure noise.
    int noise_files_per_user = 0;
    double exact_budget = 1e6;
    bool parallel_lp = true;
};

struct Decision {
    CacheConfiguration config;
    VirtualAction z;
};

class PolicyState {
public:
    PolicyState(const BipartiteNetwork& net, int catalog_size, int capacity, PolicyOptions options);
    ~PolicyState();
    PolicyState(PolicyState&&) noexcept;

    // Folds one slot of requests into X and advances t.
    void observe(std::span<const FileId> slot);

    // Theta = X + eta_{t+1} gamma on the support, negatives kept.
    std::vector<Coefficient> perturbed_counts() const;

    // Configuration for slot t+1, computed from X(t).
    Decision decide();

    std::size_t t() const noexcept { return t_; }
    int count(UserId i, FileId f) const;
    const std::map<std::pair<UserId, FileId>, int>& counts() const noexcept { return counts_; }
    double gamma(UserId i, FileId f, std::size_t slot) const;
    double current_eta() const;
    const PolicyOptions& options() const noexcept { return opt_; }

private:
    std::vector<std::pair<UserId, FileId>> support() const;

    const BipartiteNetwork* net_;
    int catalog_, capacity_;
    PolicyOptions opt_;
    std::size_t t_ = 0;
    std::map<std::pair<UserId, FileId>, int> counts_;
    std::unique_ptr<LpSolver> lp_;
};

struct RunResult {
    std::vector<int> hits;
    std::vector<int> fetches;
    std::vector<int> virtual_hits;  // <x_t, z_t>
    std::vector<CacheConfiguration> configs;  // kept only on request
};

RunResult run_policy(const BipartiteNetwork& net, const RequestTrace& trace, int capacity,
                     const PolicyOptions& options, bool keep_configs = false);

}  // namespace leadcache
