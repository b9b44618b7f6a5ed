#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/helpers.hpp"
#include "leadcache/baselines.hpp"
#include "leadcache/bounds.hpp"
#include "leadcache/exact.hpp"
#include "leadcache/harness.hpp"
#include "leadcache/kernels.hpp"
#include "leadcache/lower_bound.hpp"
#include "leadcache/lp.hpp"
#include "leadcache/policy.hpp"
#include "leadcache/random.hpp"
#include "leadcache/rounding.hpp"

using namespace leadcache;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail)
{
    std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

struct Instance {
    BipartiteNetwork net;
    std::vector<Coefficient> theta;
    int C = 1;
    int N = 1;
};

Instance random_instance(std::mt19937_64& rng)
{
    Instance in;
    const int n = 1 + static_cast<int>(rng() % 4);
    const int m = 1 + static_cast<int>(rng() % 3);
    in.N = 2 + static_cast<int>(rng() % 5);
    in.C = 1 + static_cast<int>(rng() % 2);
    in.net = testutil::random_network(n, m, rng);
    do
        in.theta = testutil::random_theta(n, in.N, rng, 0.6);
    while (in.theta.empty());
    return in;
}

// Rounding guarantee, pipage monotonicity and the LP >= ILP half of ordering.
void rounding_suite(int& lp_violations, int& lp_instances)
{
    std::mt19937_64 rng(20240601);
    int bad_alpha = 0, bad_phi = 0;
    double worst_ratio = 1e300;
    const auto t0 = std::chrono::steady_clock::now();
    for (int k = 0; k < 200; ++k) {
        const auto in = random_instance(rng);
        const auto frac = solve_lp(build_lp(in.theta, in.net, in.C));
        SurrogateEvaluator eval(in.theta, in.net);
        std::vector<double> trace;
        const auto y = pipage_round(frac, eval, &trace);
        const double opt = exact_ilp(in.theta, in.net, in.C, 1e9).value;
        const double got = placement_value(in.theta, in.net, y);
        const double alpha = approximation_factor(in.net.max_user_degree());
        if (got < alpha * opt - 1e-9)
            ++bad_alpha;
        if (opt > 0)
            worst_ratio = std::min(worst_ratio, got / opt);
        for (std::size_t s = 1; s < trace.size(); ++s)
            if (trace[s] < trace[s - 1] - 1e-9)
                ++bad_phi;
        ++lp_instances;
        if (frac.objective < opt - 1e-7)
            ++lp_violations;
    }
    const double secs = seconds_since(t0);
    report(1, "pipage approximation guarantee", bad_alpha == 0 && secs < 10.0,
           fmt("200 instances, %.0f violations, worst L/OPT %.4f, %.2f s", bad_alpha, worst_ratio,
               secs));
    report(2, "pipage surrogate monotone", bad_phi == 0,
           fmt("200 instances, %.0f decreasing steps", bad_phi));
}

std::vector<double> random_inclusion(int N, int C, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> p(N);
    for (double& v : p)
        v = u(rng);
    // Scale to sum C, capping at one and redistributing the excess.
    for (int it = 0; it < 100; ++it) {
        double fixed = 0, free = 0;
        for (double v : p)
            (v >= 1.0 ? fixed : free) += std::min(v, 1.0);
        if (std::abs(fixed + free - C) < 1e-13)
            break;
        const double s = (C - fixed) / free;
        for (double& v : p)
            if (v < 1.0)
                v = std::min(1.0, v * s);
    }
    double total = 0;
    for (double v : p)
        total += v;
    p.back() += C - total;
    return p;
}

void madow_marginals()
{
    std::mt19937_64 rng(77);
    const std::int64_t draws = 100000;
    double worst = 0;
    for (int k = 0; k < 20; ++k) {
        const auto p = random_inclusion(10, 3, rng);
        const std::uint64_t seed = rng();
        std::vector<std::int64_t> counts(10, 0);
        kernels::parallel::count_indicators(
            draws, 10,
            [&](std::int64_t d, std::vector<char>& out) {
                const double u = hash_to_unit(derive_seed(seed, {static_cast<std::uint64_t>(d)}));
                for (int i : madow_sample(p, 3, u))
                    out[i] = 1;
            },
            counts);
        for (int i = 0; i < 10; ++i)
            worst = std::max(worst, std::abs(counts[i] / double(draws) - p[i]));
    }
    report(3, "madow inclusion probabilities", worst <= 0.01,
           fmt("20 vectors x 1e5 draws, max |pi_hat - p| = %.4f (tol 0.01)", worst));
}

void pointwise_alpha()
{
    std::mt19937_64 rng(4242);
    const std::int64_t draws = 4000;
    const double factor = 1.0 - std::exp(-1.0);
    double worst[2] = {1e300, 1e300};
    int bad[2] = {0, 0};
    for (int k = 0; k < 50; ++k) {
        const int n = 2 + static_cast<int>(rng() % 4);
        const int m = 2 + static_cast<int>(rng() % 3);
        const int N = 4 + static_cast<int>(rng() % 5);
        const int C = 1 + static_cast<int>(rng() % 2);
        const auto net = testutil::random_network(n, m, rng, 0.5);
        const auto frac = solve_lp(build_lp(testutil::random_theta(n, N, rng), net, C));
        const std::uint64_t seed = rng();
        for (int which = 0; which < 2; ++which) {
            std::vector<std::int64_t> counts(frac.z.size(), 0);
            kernels::parallel::count_indicators(
                draws, frac.z.size(),
                [&](std::int64_t d, std::vector<char>& out) {
                    const auto s = derive_seed(seed, {static_cast<std::uint64_t>(d)});
                    const auto r = which == 0 ? madow_round(frac, net, s)
                                              : replacement_round(frac, net, s);
                    for (std::size_t q = 0; q < frac.z.size(); ++q)
                        out[q] = r.z.contains(frac.z[q].user, frac.z[q].file);
                },
                counts);
            for (std::size_t q = 0; q < frac.z.size(); ++q) {
                const double est = counts[q] / double(draws);
                const double margin = est - factor * frac.z[q].value;
                worst[which] = std::min(worst[which], margin);
                if (margin < -0.02)
                    ++bad[which];
            }
        }
    }
    report(4, "point-wise alpha for randomized rounding", bad[0] == 0 && bad[1] == 0,
           fmt("50 LPs x 4000 draws, worst E[z_hat]-(1-1/e)z: madow %.4f, replacement %.4f "
               "(tol -0.02)",
               worst[0], worst[1]));
}

void virtual_reward_bound()
{
    long long slots = 0, bad = 0;
    const RoundingMode modes[] = {RoundingMode::exact, RoundingMode::pipage, RoundingMode::madow,
                                  RoundingMode::replacement};
    for (int k = 0; k < 3; ++k) {
        const auto net = build_random_network(5, 3, 3, 100 + k);
        const auto trace = gen_zipf(12, 0.9, 5, 400, 200 + k);
        for (auto mode : modes)
            for (auto gamma : {GammaMode::fixed, GammaMode::fresh}) {
                PolicyOptions opt;
                opt.mode = mode;
                opt.gamma = gamma;
                opt.seed = 300 + k;
                opt.exact_budget = 1e8;
                const auto r = run_policy(net, trace, 2, opt);
                for (std::size_t t = 0; t < r.hits.size(); ++t) {
                    ++slots;
                    bad += r.hits[t] < r.virtual_hits[t];
                }
            }
    }
    report(5, "hits dominate virtual reward per slot", bad == 0,
           fmt("%.0f slots over 4 modes x 2 noise modes, %.0f violations", double(slots),
               double(bad)));
}

void relaxation_ordering(int lp_violations, int lp_instances)
{
    std::mt19937_64 rng(999);
    int bad = 0;
    for (int k = 0; k < 50; ++k) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const int m = 1 + static_cast<int>(rng() % 3);
        const int N = 2 + static_cast<int>(rng() % 5);
        const int C = 1 + static_cast<int>(rng() % 2);
        const auto net = testutil::random_network(n, m, rng);
        const auto trace = gen_zipf(N, 0.8, n, 5 + rng() % 20, rng());
        const double up = hindsight_upper_bound(net, trace, C);
        const double ex = hindsight_opt_exact(net, trace, C, 1e9).value;
        bad += up < ex - 1e-7;
    }
    report(6, "relaxation bounds the integral optimum", bad == 0 && lp_violations == 0,
           fmt("LP < ILP on %.0f of %.0f instances; hindsight upper < exact on %.0f of 50 traces",
               lp_violations, lp_instances, bad));
}

void sublinear_regret()
{
    const int n = 4, m = 3, C = 2, d = 2, k = 10, N = 2 * k;
    const std::size_t T = 4000;
    const std::size_t checkpoints[] = {500, 1000, 2000, 4000};
    const int reps = 20;
    const auto net = build_random_network(n, m, d, 7);
    std::vector<double> mean_regret(4, 0.0);
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) {
        const auto trace = gen_adversarial_uniform(k, n, T, derive_seed(1234, {std::uint64_t(r)}));
        PolicyOptions opt;
        opt.mode = RoundingMode::exact;
        opt.seed = derive_seed(5678, {std::uint64_t(r)});
        opt.exact_budget = 1e7;
        const auto res = run_policy(net, trace, C, opt);
        double cum = 0;
        std::size_t c = 0;
        for (std::size_t t = 0; t < T; ++t) {
            cum += res.hits[t];
            if (t + 1 == checkpoints[c]) {
                const double best =
                    hindsight_opt_exact(net, trace.subrange(0, t + 1), C, 1e7).value;
                mean_regret[c] += (best - cum) / reps;
                ++c;
            }
        }
    }
    bool under = true;
    std::string detail;
    for (int c = 0; c < 4; ++c) {
        const double ub = upper_bound(n, m, C, net.max_cache_degree(), N, checkpoints[c]);
        if (c > 0)
            under = under && mean_regret[c] <= ub;
        detail += fmt("R(%.0f)=%.1f<=%.1f ", double(checkpoints[c]), mean_regret[c], ub);
    }
    const double early = mean_regret[0] / 500.0, late = mean_regret[3] / 4000.0;
    const double secs = seconds_since(t0);
    const bool ok = under && late <= 0.5 * early && secs < 300.0;
    report(7, "sublinear regret", ok,
           detail + fmt("R(4000)/4000=%.4f vs 0.5*R(500)/500=%.4f, %.1f s", late, 0.5 * early,
                        secs));
}

void finite_fetches()
{
    const std::size_t T = 5000, tail = T - (T * 2) / 5;
    const auto net = build_random_network(3, 2, 3, 1);
    int quiet = 0;
    std::string last;
    for (int s = 0; s < 10; ++s) {
        const auto trace = gen_zipf(10, 1.2, 3, T, derive_seed(31, {std::uint64_t(s)}));
        PolicyOptions opt;
        opt.mode = RoundingMode::exact;
        opt.gamma = GammaMode::fixed;
        opt.seed = derive_seed(37, {std::uint64_t(s)});
        const auto r = run_policy(net, trace, 2, opt);
        int events = 0;
        for (std::size_t t = tail; t < T; ++t)
            events += r.fetches[t] > 0;
        quiet += events == 0;
    }
    report(8, "fetching stops under stationary requests", quiet >= 9,
           fmt("%.0f of 10 seeds without fetch events in slots > %.0f", quiet, double(tail)));
}

void balls_into_bins()
{
    const double mean = mean_top_bins_load(2, 1, 1000, 10000, 2718);
    const double target = 500.0 + std::sqrt(1000.0 / (2.0 * std::acos(-1.0)));
    report(9, "top-C bin load", std::abs(mean - target) <= 2.0,
           fmt("mean %.3f vs %.3f (tol 2), estimate %.3f", mean, target,
               top_half_load_estimate(1, 1000)));
}

void baseline_sanity()
{
    int traces = 0, bad = 0;
    RenewalParams renewal;
    renewal.rates = {std::vector<double>(15, 0.05)};
    for (int k = 0; k < 6; ++k) {
        const auto net = build_random_network(6, 3, 3, 40 + k);
        RequestTrace trace = k % 3 == 0   ? gen_zipf(20, 0.8, 6, 600, 50 + k)
                             : k % 3 == 1 ? gen_adversarial_uniform(6, 6, 600, 50 + k)
                                          : gen_renewal(15, 6, 600, renewal, 50 + k);
        for (int C : {1, 2, 4})
            for (auto fan : {FanOut::all, FanOut::single}) {
                ++traces;
                const auto b = run_reactive(net, trace, C, EvictionRule::belady, fan).cache_hits;
                const auto l = run_reactive(net, trace, C, EvictionRule::lru, fan).cache_hits;
                const auto f = run_reactive(net, trace, C, EvictionRule::lfu, fan).cache_hits;
                for (std::size_t j = 0; j < b.size(); ++j)
                    bad += b[j] < l[j] || b[j] < f[j];
            }
    }
    int ordered = 0;
    std::string rates;
    for (int s = 0; s < 3; ++s) {
        const auto net = build_random_network(6, 3, 3, 11 + s);
        const auto trace = gen_zipf(20, 1.0, 6, 1500, 5 + s);
        PolicyOptions opt;
        opt.mode = RoundingMode::pipage;
        opt.seed = 17 + s;
        auto total = [](const std::vector<int>& h) {
            double x = 0;
            for (int v : h)
                x += v;
            return x;
        };
        const double slots = 6.0 * 1500;
        const double lc = total(run_policy(net, trace, 2, opt).hits) / slots;
        const double lfu = total(run_reactive(net, trace, 2, EvictionRule::lfu).hits) / slots;
        const double lru = total(run_reactive(net, trace, 2, EvictionRule::lru).hits) / slots;
        ordered += lc >= lfu && lfu >= lru;
        rates += fmt("(%.3f %.3f %.3f) ", lc, lfu, lru);
    }
    report(10, "baseline ordering", bad == 0 && ordered == 3,
           fmt("%.0f cache/eviction violations over %.0f runs; ", bad, traces) +
               "zipf leadcache-pipage/lfu/lru hit rates " + rates);
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void determinism()
{
    ExperimentConfig c;
    c.network = {"", 6, 3, 3, 11};
    c.trace.generator = "zipf";
    c.trace.catalog = 20;
    c.trace.slots = 400;
    c.trace.seed = 5;
    c.capacity = 2;
    for (const char* p : {"leadcache-pipage", "leadcache-madow", "leadcache-replacement", "lru",
                          "lfu", "belady"})
        c.policies.push_back(parse_policy_spec(p));
    c.policies.push_back(parse_policy_spec("leadcache-madow"));
    c.policies.back().gamma = GammaMode::fresh;
    c.policies.back().label = "leadcache-madow-fresh";
    c.intervals = 2;
    c.replicates = 2;
    c.master_seed = 42;
    const auto root = fs::temp_directory_path() / "leadcache_acceptance_rerun";
    fs::remove_all(root);
    std::vector<std::string> outputs[2];
    for (int run = 0; run < 2; ++run) {
        c.output_dir = (root / std::to_string(run)).string();
        run_experiment(c);
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(c.output_dir))
            files.push_back(e.path().filename());
        std::sort(files.begin(), files.end());
        for (const auto& f : files)
            outputs[run].push_back(f.string() + "\n" + slurp(fs::path(c.output_dir) / f));
    }
    const bool ok = !outputs[0].empty() && outputs[0] == outputs[1];
    report(11, "rerun determinism", ok,
           fmt("%.0f output files compared byte for byte", double(outputs[0].size())));
    fs::remove_all(root);
}

}  // namespace

int main()
{
    int lp_violations = 0, lp_instances = 0;
    rounding_suite(lp_violations, lp_instances);
    madow_marginals();
    pointwise_alpha();
    virtual_reward_bound();
    relaxation_ordering(lp_violations, lp_instances);
    sublinear_regret();
    finite_fetches();
    balls_into_bins();
    baseline_sanity();
    determinism();
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
