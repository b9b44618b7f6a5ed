#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leadcache/baselines.hpp"
#include "leadcache/bounds.hpp"
#include "leadcache/network.hpp"
#include "leadcache/policy.hpp"
#include "leadcache/requests.hpp"

namespace leadcache {

struct PolicySpec {
    std::string name = "leadcache";  // leadcache | lru | lfu | belady
    RoundingMode mode = RoundingMode::pipage;
    GammaMode gamma = GammaMode::fixed;
    RateMode rate = RateMode::integral;
    bool exact_support = false;
    int noise_files_per_user = 0;
    FanOut fanout = FanOut::all;
    std::string label;  // defaults to name or name-mode

    std::string display() const;
    friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

// "lru", "lfu", "belady", "leadcache" or "leadcache-<mode>".
PolicySpec parse_policy_spec(const std::string& s);

struct NetworkSource {
    std::string file;               // JSON network; when empty, generated
    int n = 0, m = 0, d = 0;
    std::uint64_t seed = 0;
    friend bool operator==(const NetworkSource&, const NetworkSource&) = default;
};

struct TraceSource {
    std::string file;                  // when empty, generated
    std::string assignment = "by_column";  // by_column | round_robin
    std::string generator = "zipf";    // zipf | adversarial | renewal
    int catalog = 0;                   // N (0: distinct ids of a file trace)
    double alpha = 1.0;                // zipf exponent
    int k = 0;                         // adversarial: catalog 2k
    std::size_t slots = 0;
    std::uint64_t seed = 0;
    std::vector<double> rates;         // renewal: per-file rates shared by all users
    friend bool operator==(const TraceSource&, const TraceSource&) = default;
};

struct ExperimentConfig {
    NetworkSource network;
    TraceSource trace;
    int capacity = 0;
    double capacity_fraction = 0.0;  // C = max(1, round(fraction * N)) when capacity is 0
    std::vector<PolicySpec> policies;
    std::size_t horizon = 0;  // 0: the whole trace
    int intervals = 20;
    int replicates = 1;
    std::uint64_t master_seed = 0;
    double oracle_budget = 1e6;
    std::string output_dir;  // empty: nothing written

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

std::string config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct CellSummary {
    std::string policy;
    int interval = 0;
    int replicate = 0;
    std::size_t begin = 0, end = 0;
    std::uint64_t seed = 0;
    double hits = 0.0, fetches = 0.0;
    double hit_rate = 0.0, fetch_rate = 0.0;
    double opt = 0.0;
    std::string oracle;  // exact | lp_upper
    double regret = 0.0, alpha_regret = 0.0;
    std::string error;

    friend bool operator==(const CellSummary&, const CellSummary&) = default;
};

struct PolicySummary {
    std::string policy;
    int cells = 0;
    int failed = 0;
    double hit_rate = 0.0, fetch_rate = 0.0, regret = 0.0, alpha_regret = 0.0;

    friend bool operator==(const PolicySummary&, const PolicySummary&) = default;
};

struct Summary {
    int n = 0, m = 0, d = 0, catalog = 0, capacity = 0;
    std::size_t horizon = 0;
    std::vector<CellSummary> cells;
    std::vector<PolicySummary> policies;
    BoundReport bounds;  // for the longest interval

    friend bool operator==(const Summary&, const Summary&) = default;
};

std::string summary_to_json(const Summary& s);
Summary summary_from_json(const std::string& text);

BipartiteNetwork load_or_build_network(const NetworkSource& src);
RequestTrace load_or_generate_trace(const TraceSource& src, int num_users);
int resolve_capacity(const ExperimentConfig& c, int catalog);

// Per-slot hit/fetch series of one policy on a trace.
struct Series {
    std::vector<int> hits, fetches;
};
Series run_spec(const PolicySpec& spec, const BipartiteNetwork& net, const RequestTrace& trace,
                int capacity, std::uint64_t seed, double exact_budget);

// Writes metrics_<policy>_i<interval>_r<replicate>.csv and summary.json when
// output_dir is set.
Summary run_experiment(const ExperimentConfig& config);

}  // namespace leadcache
