#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "leadcache/baselines.hpp"
#include "leadcache/bounds.hpp"
#include "leadcache/exact.hpp"
#include "leadcache/harness.hpp"
#include "leadcache/io.hpp"
#include "leadcache/lp.hpp"
#include "leadcache/network.hpp"
#include "leadcache/policy.hpp"
#include "leadcache/requests.hpp"
#include "leadcache/rounding.hpp"

using namespace leadcache;

namespace {

// Writes to the file when a path is given, stdout otherwise.
template <class F>
void emit(const std::string& path, F write)
{
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    auto out = open_output(path);
    write(out);
}

std::vector<Coefficient> read_theta(const std::string& path)
{
    auto in = open_input(path);
    return read_theta_csv(in);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Online caching on bipartite user-cache networks"};
    app.require_subcommand(1);

    // gen-net
    auto* gen_net = app.add_subcommand("gen-net", "Random network with cache degree d");
    int gn_n = 0, gn_m = 0, gn_d = 0;
    std::uint64_t gn_seed = 0;
    std::string gn_out;
    gen_net->add_option("--n", gn_n, "users")->required();
    gen_net->add_option("--m", gn_m, "caches")->required();
    gen_net->add_option("--d", gn_d, "users per cache")->required();
    gen_net->add_option("--seed", gn_seed);
    gen_net->add_option("--out", gn_out, "output JSON (default stdout)");

    // gen-trace
    auto* gen_trace = app.add_subcommand("gen-trace", "Synthetic request trace");
    TraceSource gt;
    int gt_users = 0;
    std::string gt_out;
    gen_trace->add_option("--generator", gt.generator)
        ->check(CLI::IsMember({"zipf", "adversarial", "renewal"}));
    gen_trace->add_option("--users", gt_users)->required();
    gen_trace->add_option("--catalog", gt.catalog);
    gen_trace->add_option("--alpha", gt.alpha, "zipf exponent");
    gen_trace->add_option("--k", gt.k, "adversarial: catalog is 2k");
    gen_trace->add_option("--slots", gt.slots)->required();
    gen_trace->add_option("--seed", gt.seed);
    gen_trace->add_option("--rates", gt.rates, "renewal: per-file rates")->delimiter(',');
    gen_trace->add_option("--out", gt_out, "output CSV t,user_id,file_id (default stdout)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run one policy over a trace");
    std::string sim_net, sim_trace, sim_policy = "leadcache", sim_mode = "pipage",
                sim_gamma = "fixed", sim_rate = "integral", sim_fanout = "all",
                sim_assign = "by_column", sim_out;
    int sim_capacity = 0, sim_catalog = 0, sim_noise = 0;
    std::uint64_t sim_seed = 0;
    bool sim_exact_support = false;
    double sim_budget = 1e6;
    simulate->add_option("--net", sim_net)->required();
    simulate->add_option("--trace", sim_trace)->required();
    simulate->add_option("--assignment", sim_assign)->check(CLI::IsMember({"by_column", "round_robin"}));
    simulate->add_option("--catalog", sim_catalog, "catalog size (0: distinct ids)");
    simulate->add_option("--capacity", sim_capacity)->required();
    simulate->add_option("--policy", sim_policy)
        ->check(CLI::IsMember({"leadcache", "lru", "lfu", "belady"}));
    simulate->add_option("--mode", sim_mode)
        ->check(CLI::IsMember({"exact", "pipage", "madow", "replacement"}));
    simulate->add_option("--gamma", sim_gamma)->check(CLI::IsMember({"fixed", "fresh"}));
    simulate->add_option("--rate", sim_rate)->check(CLI::IsMember({"integral", "relaxed"}));
    simulate->add_option("--seed", sim_seed);
    simulate->add_flag("--exact-support", sim_exact_support);
    simulate->add_option("--noise-files", sim_noise);
    simulate->add_option("--fanout", sim_fanout)->check(CLI::IsMember({"all", "single"}));
    simulate->add_option("--budget", sim_budget, "exact-mode enumeration budget");
    simulate->add_option("--out", sim_out, "metrics CSV (default stdout)");

    // lp
    auto* lp = app.add_subcommand("lp", "Solve the LP relaxation for given coefficients");
    std::string lp_theta, lp_net, lp_out;
    int lp_capacity = 0;
    lp->add_option("--theta", lp_theta, "CSV user_id,file_id,value")->required();
    lp->add_option("--net", lp_net)->required();
    lp->add_option("--capacity", lp_capacity)->required();
    lp->add_option("--out", lp_out);

    // round
    auto* round = app.add_subcommand("round", "Round a fractional allocation");
    std::string rd_method = "pipage", rd_frac, rd_net, rd_theta, rd_out;
    std::uint64_t rd_seed = 0;
    int rd_capacity = 0;
    double rd_budget = 1e6;
    round->add_option("--method", rd_method)
        ->check(CLI::IsMember({"pipage", "madow", "replacement", "exact"}));
    round->add_option("--frac", rd_frac, "fractional allocation CSV");
    round->add_option("--net", rd_net)->required();
    round->add_option("--theta", rd_theta, "coefficients (pipage, exact)");
    round->add_option("--capacity", rd_capacity, "exact: capacity");
    round->add_option("--seed", rd_seed);
    round->add_option("--budget", rd_budget);
    round->add_option("--out", rd_out);

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Best static configuration in hindsight");
    std::string or_net, or_trace, or_kind = "auto", or_assign = "by_column", or_out;
    int or_capacity = 0, or_catalog = 0;
    double or_budget = 1e6;
    oracle->add_option("--net", or_net)->required();
    oracle->add_option("--trace", or_trace)->required();
    oracle->add_option("--assignment", or_assign)->check(CLI::IsMember({"by_column", "round_robin"}));
    oracle->add_option("--catalog", or_catalog);
    oracle->add_option("--capacity", or_capacity)->required();
    oracle->add_option("--kind", or_kind)->check(CLI::IsMember({"auto", "exact", "lp"}));
    oracle->add_option("--budget", or_budget);
    oracle->add_option("--out", or_out, "configuration CSV for the exact oracle");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Regret upper and lower bounds");
    int b_n = 0, b_m = 0, b_C = 0, b_d = 0, b_N = 0, b_delta = 1;
    std::size_t b_T = 0;
    bounds->add_option("--n", b_n)->required();
    bounds->add_option("--m", b_m)->required();
    bounds->add_option("--C", b_C)->required();
    bounds->add_option("--d", b_d)->required();
    bounds->add_option("--N", b_N)->required();
    bounds->add_option("--T", b_T)->required();
    bounds->add_option("--delta", b_delta, "max caches per user (approximation factor)");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run an experiment config");
    std::string ex_config;
    std::optional<std::string> ex_out;
    std::optional<std::uint64_t> ex_seed;
    std::optional<int> ex_reps, ex_intervals, ex_capacity;
    std::optional<std::size_t> ex_horizon;
    std::optional<double> ex_budget;
    std::vector<std::string> ex_policies;
    experiment->add_option("--config", ex_config)->required();
    experiment->add_option("--output-dir", ex_out);
    experiment->add_option("--master-seed", ex_seed);
    experiment->add_option("--replicates", ex_reps);
    experiment->add_option("--intervals", ex_intervals);
    experiment->add_option("--capacity", ex_capacity);
    experiment->add_option("--horizon", ex_horizon);
    experiment->add_option("--oracle-budget", ex_budget);
    experiment->add_option("--policy", ex_policies, "replaces the policy list (repeatable)");

    CLI11_PARSE(app, argc, argv);

    const auto assignment = [](const std::string& s) {
        return s == "round_robin" ? Assignment::round_robin : Assignment::by_column;
    };

    try {
        if (*gen_net) {
            const auto net = build_random_network(gn_n, gn_m, gn_d, gn_seed);
            emit(gn_out, [&](std::ostream& o) { o << network_to_json(net); });
        } else if (*gen_trace) {
            const auto trace = load_or_generate_trace(gt, gt_users);
            emit(gt_out, [&](std::ostream& o) { write_trace(trace, o); });
        } else if (*simulate) {
            const auto net = load_network(sim_net);
            const auto trace = load_trace(sim_trace, net.num_users(), assignment(sim_assign), sim_catalog);
            PolicySpec spec;
            spec.name = sim_policy;
            spec.mode = parse_rounding_mode(sim_mode);
            spec.gamma = parse_gamma_mode(sim_gamma);
            spec.rate = parse_rate_mode(sim_rate);
            spec.exact_support = sim_exact_support;
            spec.noise_files_per_user = sim_noise;
            spec.fanout = sim_fanout == "all" ? FanOut::all : FanOut::single;
            const auto series = run_spec(spec, net, trace, sim_capacity, sim_seed, sim_budget);
            std::vector<MetricRow> rows;
            long long ch = 0, cf = 0;
            for (std::size_t t = 0; t < series.hits.size(); ++t) {
                ch += series.hits[t];
                cf += series.fetches[t];
                rows.push_back({t + 1, spec.display(), series.hits[t], series.fetches[t], ch, cf});
            }
            emit(sim_out, [&](std::ostream& o) { write_metrics_csv(o, rows); });
            std::cerr << "hit_rate " << hit_rate(ch, net.num_users(), trace.length())
                      << " fetch_rate " << fetch_rate(cf, net.num_caches(), trace.length()) << "\n";
        } else if (*lp) {
            const auto net = load_network(lp_net);
            const auto frac = solve_lp(build_lp(read_theta(lp_theta), net, lp_capacity));
            emit(lp_out, [&](std::ostream& o) { write_fractional_csv(o, frac); });
        } else if (*round) {
            const auto net = load_network(rd_net);
            CacheConfiguration y;
            if (rd_method == "exact") {
                if (rd_theta.empty() || rd_capacity < 1)
                    throw ConfigError("round --method exact needs --theta and --capacity");
                y = exact_ilp(read_theta(rd_theta), net, rd_capacity, rd_budget).config;
            } else {
                if (rd_frac.empty())
                    throw ConfigError("round needs --frac");
                auto in = open_input(rd_frac);
                auto frac = read_fractional_csv(in);
                if (frac.num_caches < net.num_caches()) {
                    frac.slack.resize(net.num_caches(), frac.capacity);
                    frac.y.resize(static_cast<std::size_t>(net.num_caches()) * frac.files.size(), 0.0);
                    frac.num_caches = net.num_caches();
                }
                if (rd_method == "pipage") {
                    const auto theta = rd_theta.empty() ? frac.z : read_theta(rd_theta);
                    SurrogateEvaluator eval(theta, net);
                    y = pipage_round(frac, eval);
                } else if (rd_method == "madow") {
                    y = madow_round(frac, net, rd_seed).config;
                } else {
                    y = replacement_round(frac, net, rd_seed).config;
                }
            }
            emit(rd_out, [&](std::ostream& o) { write_configuration_csv(o, y); });
        } else if (*oracle) {
            const auto net = load_network(or_net);
            const auto trace = load_trace(or_trace, net.num_users(), assignment(or_assign), or_catalog);
            bool exact = or_kind == "exact";
            if (or_kind == "auto")
                exact = configuration_count(trace.catalog_size(), or_capacity, net.num_caches()) <=
                        or_budget;
            if (exact) {
                const auto r = hindsight_opt_exact(net, trace, or_capacity, or_budget);
                std::cout << "oracle exact value " << format_double(r.value) << "\n";
                if (!or_out.empty())
                    emit(or_out, [&](std::ostream& o) { write_configuration_csv(o, r.config); });
            } else {
                std::cout << "oracle lp_upper value "
                          << format_double(hindsight_upper_bound(net, trace, or_capacity)) << "\n";
            }
        } else if (*bounds) {
            std::cout << "upper_bound " << format_double(upper_bound(b_n, b_m, b_C, b_d, b_N, b_T))
                      << "\nlower_bound " << format_double(lower_bound(b_n, b_m, b_C, b_d, b_T))
                      << "\nalpha " << format_double(approximation_factor(b_delta)) << "\n";
        } else if (*experiment) {
            auto cfg = load_config(ex_config);
            if (ex_out) cfg.output_dir = *ex_out;
            if (ex_seed) cfg.master_seed = *ex_seed;
            if (ex_reps) cfg.replicates = *ex_reps;
            if (ex_intervals) cfg.intervals = *ex_intervals;
            if (ex_capacity) cfg.capacity = *ex_capacity;
            if (ex_horizon) cfg.horizon = *ex_horizon;
            if (ex_budget) cfg.oracle_budget = *ex_budget;
            if (!ex_policies.empty()) {
                cfg.policies.clear();
                for (const auto& p : ex_policies)
                    cfg.policies.push_back(parse_policy_spec(p));
            }
            const auto summary = run_experiment(cfg);
            if (cfg.output_dir.empty())
                std::cout << summary_to_json(summary);
            else
                for (const auto& p : summary.policies)
                    std::cout << p.policy << " hit_rate " << p.hit_rate << " fetch_rate "
                              << p.fetch_rate << " regret " << p.regret << "\n";
        }
    } catch (const ParseError& e) {
        std::cerr << "error (line " << e.line() << "): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
