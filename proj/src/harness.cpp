#include "leadcache/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "leadcache/exact.hpp"
#include "leadcache/io.hpp"
#include "leadcache/random.hpp"
#include "leadcache/rounding.hpp"

namespace leadcache {

using nlohmann::json;

std::string PolicySpec::display() const
{
    if (!label.empty())
        return label;
    if (name == "leadcache")
        return name + "-" + to_string(mode);
    return name;
}

PolicySpec parse_policy_spec(const std::string& s)
{
    PolicySpec p;
    if (s == "lru" || s == "lfu" || s == "belady") {
        p.name = s;
        return p;
    }
    if (s == "leadcache")
        return p;
    const std::string prefix = "leadcache-";
    if (s.rfind(prefix, 0) == 0) {
        p.mode = parse_rounding_mode(s.substr(prefix.size()));
        return p;
    }
    throw ConfigError("unknown policy '" + s + "'");
}

namespace {

json policy_json(const PolicySpec& p)
{
    json j{{"name", p.name}};
    if (p.name == "leadcache") {
        j["mode"] = to_string(p.mode);
        j["gamma"] = to_string(p.gamma);
        j["rate"] = to_string(p.rate);
        j["exact_support"] = p.exact_support;
        j["noise_files_per_user"] = p.noise_files_per_user;
    } else {
        j["fanout"] = p.fanout == FanOut::all ? "all" : "single";
    }
    if (!p.label.empty())
        j["label"] = p.label;
    return j;
}

PolicySpec policy_from(const json& j)
{
    if (j.is_string())
        return parse_policy_spec(j.get<std::string>());
    PolicySpec p = parse_policy_spec(j.at("name").get<std::string>());
    if (j.contains("mode")) p.mode = parse_rounding_mode(j["mode"].get<std::string>());
    if (j.contains("gamma")) p.gamma = parse_gamma_mode(j["gamma"].get<std::string>());
    if (j.contains("rate")) p.rate = parse_rate_mode(j["rate"].get<std::string>());
    if (j.contains("exact_support")) p.exact_support = j["exact_support"].get<bool>();
    if (j.contains("noise_files_per_user"))
        p.noise_files_per_user = j["noise_files_per_user"].get<int>();
    if (j.contains("fanout")) {
        const auto f = j["fanout"].get<std::string>();
        if (f != "all" && f != "single")
            throw ConfigError("fanout must be 'all' or 'single'");
        p.fanout = f == "all" ? FanOut::all : FanOut::single;
    }
    if (j.contains("label")) p.label = j["label"].get<std::string>();
    return p;
}

template <class T>
void get_if(const json& j, const char* key, T& out)
{
    if (j.contains(key))
        out = j.at(key).get<T>();
}

json bounds_json(const BoundReport& b)
{
    return {{"upper_bound", b.upper_bound}, {"lower_bound", b.lower_bound}, {"alpha", b.alpha}};
}

}  // namespace

std::string config_to_json(const ExperimentConfig& c)
{
    json j;
    j["network"] = c.network.file.empty()
                       ? json{{"n", c.network.n}, {"m", c.network.m}, {"d", c.network.d},
                              {"seed", c.network.seed}}
                       : json{{"file", c.network.file}};
    json t;
    if (!c.trace.file.empty()) {
        t = {{"file", c.trace.file}, {"assignment", c.trace.assignment}, {"catalog", c.trace.catalog}};
    } else {
        t = {{"generator", c.trace.generator}, {"catalog", c.trace.catalog},
             {"slots", c.trace.slots}, {"seed", c.trace.seed}};
        if (c.trace.generator == "zipf") t["alpha"] = c.trace.alpha;
        if (c.trace.generator == "adversarial") t["k"] = c.trace.k;
        if (c.trace.generator == "renewal") t["rates"] = c.trace.rates;
    }
    j["trace"] = t;
    if (c.capacity > 0)
        j["capacity"] = c.capacity;
    else
        j["capacity_fraction"] = c.capacity_fraction;
    j["policies"] = json::array();
    for (const auto& p : c.policies)
        j["policies"].push_back(policy_json(p));
    j["horizon"] = c.horizon;
    j["intervals"] = c.intervals;
    j["replicates"] = c.replicates;
    j["master_seed"] = c.master_seed;
    j["oracle_budget"] = c.oracle_budget;
    j["output_dir"] = c.output_dir;
    return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    try {
        const auto& net = j.at("network");
        get_if(net, "file", c.network.file);
        get_if(net, "n", c.network.n);
        get_if(net, "m", c.network.m);
        get_if(net, "d", c.network.d);
        get_if(net, "seed", c.network.seed);
        const auto& t = j.at("trace");
        get_if(t, "file", c.trace.file);
        get_if(t, "assignment", c.trace.assignment);
        get_if(t, "generator", c.trace.generator);
        get_if(t, "catalog", c.trace.catalog);
        get_if(t, "alpha", c.trace.alpha);
        get_if(t, "k", c.trace.k);
        get_if(t, "slots", c.trace.slots);
        get_if(t, "seed", c.trace.seed);
        get_if(t, "rates", c.trace.rates);
        get_if(j, "capacity", c.capacity);
        get_if(j, "capacity_fraction", c.capacity_fraction);
        if (j.contains("policies"))
            for (const auto& p : j["policies"])
                c.policies.push_back(policy_from(p));
        get_if(j, "horizon", c.horizon);
        get_if(j, "intervals", c.intervals);
        get_if(j, "replicates", c.replicates);
        get_if(j, "master_seed", c.master_seed);
        get_if(j, "oracle_budget", c.oracle_budget);
        get_if(j, "output_dir", c.output_dir);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (c.intervals < 1 || c.replicates < 1)
        throw ConfigError("config: intervals and replicates must be >= 1");
    if (c.policies.empty())
        throw ConfigError("config: no policies listed");
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    auto in = open_input(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::string summary_to_json(const Summary& s)
{
    json j;
    j["n"] = s.n;
    j["m"] = s.m;
    j["d"] = s.d;
    j["catalog"] = s.catalog;
    j["capacity"] = s.capacity;
    j["horizon"] = s.horizon;
    j["bounds"] = bounds_json(s.bounds);
    j["policies"] = json::array();
    for (const auto& p : s.policies)
        j["policies"].push_back({{"policy", p.policy}, {"cells", p.cells}, {"failed", p.failed},
                                 {"hit_rate", p.hit_rate}, {"fetch_rate", p.fetch_rate},
                                 {"regret", p.regret}, {"alpha_regret", p.alpha_regret}});
    j["cells"] = json::array();
    for (const auto& c : s.cells)
        j["cells"].push_back({{"policy", c.policy}, {"interval", c.interval},
                              {"replicate", c.replicate}, {"begin", c.begin}, {"end", c.end},
                              {"seed", c.seed}, {"hits", c.hits}, {"fetches", c.fetches},
                              {"hit_rate", c.hit_rate}, {"fetch_rate", c.fetch_rate},
                              {"opt", c.opt}, {"oracle", c.oracle}, {"regret", c.regret},
                              {"alpha_regret", c.alpha_regret}, {"error", c.error}});
    return j.dump(2) + "\n";
}

Summary summary_from_json(const std::string& text)
{
    const json j = json::parse(text);
    Summary s;
    s.n = j.at("n");
    s.m = j.at("m");
    s.d = j.at("d");
    s.catalog = j.at("catalog");
    s.capacity = j.at("capacity");
    s.horizon = j.at("horizon");
    s.bounds.upper_bound = j.at("bounds").at("upper_bound");
    s.bounds.lower_bound = j.at("bounds").at("lower_bound");
    s.bounds.alpha = j.at("bounds").at("alpha");
    for (const auto& p : j.at("policies"))
        s.policies.push_back({p.at("policy"), p.at("cells"), p.at("failed"), p.at("hit_rate"),
                              p.at("fetch_rate"), p.at("regret"), p.at("alpha_regret")});
    for (const auto& c : j.at("cells")) {
        CellSummary x;
        x.policy = c.at("policy");
        x.interval = c.at("interval");
        x.replicate = c.at("replicate");
        x.begin = c.at("begin");
        x.end = c.at("end");
        x.seed = c.at("seed");
        x.hits = c.at("hits");
        x.fetches = c.at("fetches");
        x.hit_rate = c.at("hit_rate");
        x.fetch_rate = c.at("fetch_rate");
        x.opt = c.at("opt");
        x.oracle = c.at("oracle");
        x.regret = c.at("regret");
        x.alpha_regret = c.at("alpha_regret");
        x.error = c.at("error");
        s.cells.push_back(std::move(x));
    }
    return s;
}

BipartiteNetwork load_or_build_network(const NetworkSource& src)
{
    if (!src.file.empty())
        return load_network(src.file);
    return build_random_network(src.n, src.m, src.d, src.seed);
}

RequestTrace load_or_generate_trace(const TraceSource& src, int num_users)
{
    if (!src.file.empty()) {
        Assignment a;
        if (src.assignment == "by_column")
            a = Assignment::by_column;
        else if (src.assignment == "round_robin")
            a = Assignment::round_robin;
        else
            throw ConfigError("trace assignment must be 'by_column' or 'round_robin'");
        return load_trace(src.file, num_users, a, src.catalog);
    }
    if (src.generator == "zipf")
        return gen_zipf(src.catalog, src.alpha, num_users, src.slots, src.seed);
    if (src.generator == "adversarial")
        return gen_adversarial_uniform(src.k, num_users, src.slots, src.seed);
    if (src.generator == "renewal") {
        RenewalParams p;
        p.rates = {src.rates};
        return gen_renewal(src.catalog, num_users, src.slots, p, src.seed);
    }
    throw ConfigError("unknown trace generator '" + src.generator + "'");
}

int resolve_capacity(const ExperimentConfig& c, int catalog)
{
    if (c.capacity > 0)
        return c.capacity;
    if (c.capacity_fraction > 0.0)
        return std::max(1, static_cast<int>(std::lround(c.capacity_fraction * catalog)));
    throw ConfigError("config: set capacity or capacity_fraction");
}

Series run_spec(const PolicySpec& spec, const BipartiteNetwork& net, const RequestTrace& trace,
                int capacity, std::uint64_t seed, double exact_budget)
{
    if (spec.name == "leadcache") {
        PolicyOptions o;
        o.mode = spec.mode;
        o.gamma = spec.gamma;
        o.rate = spec.rate;
        o.seed = seed;
        o.exact_support = spec.exact_support;
        o.noise_files_per_user = spec.noise_files_per_user;
        o.exact_budget = exact_budget;
        o.parallel_lp = false;  // cells already run in parallel
        auto r = run_policy(net, trace, capacity, o);
        return {std::move(r.hits), std::move(r.fetches)};
    }
    auto r = run_reactive(net, trace, capacity, parse_eviction_rule(spec.name), spec.fanout);
    return {std::move(r.hits), std::move(r.fetches)};
}

namespace {

struct Oracle {
    double value = 0.0;
    std::string kind;
    std::string error;
};

Oracle hindsight(const BipartiteNetwork& net, const RequestTrace& trace, int capacity, double budget)
{
    Oracle o;
    try {
        if (configuration_count(trace.catalog_size(), capacity, net.num_caches()) <= budget) {
            o.value = hindsight_opt_exact(net, trace, capacity, budget).value;
            o.kind = "exact";
        } else {
            o.value = hindsight_upper_bound(net, trace, capacity);
            o.kind = "lp_upper";
        }
    } catch (const std::exception& e) {
        o.error = e.what();
    }
    return o;
}

}  // namespace

Summary run_experiment(const ExperimentConfig& config)
{
    const BipartiteNetwork net = load_or_build_network(config.network);
    RequestTrace full = load_or_generate_trace(config.trace, net.num_users());
    const std::size_t T =
        config.horizon > 0 ? std::min(config.horizon, full.length()) : full.length();
    const RequestTrace trace = full.subrange(0, T);
    const int N = trace.catalog_size();
    const int C = resolve_capacity(config, N);

    Summary s;
    s.n = net.num_users();
    s.m = net.num_caches();
    s.d = net.max_cache_degree();
    s.catalog = N;
    s.capacity = C;
    s.horizon = T;

    const int parts = static_cast<int>(std::max<std::size_t>(
        1, std::min<std::size_t>(static_cast<std::size_t>(config.intervals), T)));
    const auto ranges = split_intervals(T, parts);
    std::size_t longest = 0;
    for (const auto& [b, e] : ranges)
        longest = std::max(longest, e - b);
    const double alpha = approximation_factor(net.max_user_degree());
    if (N >= C && N > 0) {
        const auto full_bounds = bound_report(net, C, N, longest);
        s.bounds = full_bounds;
    } else {
        s.bounds.alpha = alpha;
    }

    std::vector<RequestTrace> pieces;
    for (const auto& [b, e] : ranges)
        pieces.push_back(trace.subrange(b, e));
    std::vector<Oracle> oracles(pieces.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < pieces.size(); ++k)
        oracles[k] = hindsight(net, pieces[k], C, config.oracle_budget);

    const std::size_t P = config.policies.size();
    const std::size_t I = pieces.size();
    const std::size_t R = static_cast<std::size_t>(config.replicates);
    const std::size_t cells = P * I * R;
    std::vector<CellSummary> out(cells);
    std::vector<Series> series(cells);

#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < cells; ++c) {
        const std::size_t p = c / (I * R), k = (c / R) % I, r = c % R;
        CellSummary& cell = out[c];
        const PolicySpec& spec = config.policies[p];
        cell.policy = spec.display();
        cell.interval = static_cast<int>(k);
        cell.replicate = static_cast<int>(r);
        cell.begin = ranges[k].first;
        cell.end = ranges[k].second;
        cell.seed = derive_seed(config.master_seed, {p, k, r});
        try {
            series[c] = run_spec(spec, net, pieces[k], C, cell.seed, config.oracle_budget);
            for (int h : series[c].hits) cell.hits += h;
            for (int f : series[c].fetches) cell.fetches += f;
            const std::size_t len = cell.end - cell.begin;
            cell.hit_rate = hit_rate(cell.hits, net.num_users(), len);
            cell.fetch_rate = fetch_rate(cell.fetches, net.num_caches(), len);
            if (!oracles[k].error.empty())
                throw Error("hindsight oracle: " + oracles[k].error);
            cell.opt = oracles[k].value;
            cell.oracle = oracles[k].kind;
            cell.regret = regret(cell.hits, cell.opt);
            cell.alpha_regret = regret(cell.hits, cell.opt, alpha);
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
    }

    for (std::size_t p = 0; p < P; ++p) {
        PolicySummary ps;
        ps.policy = config.policies[p].display();
        for (std::size_t c = p * I * R; c < (p + 1) * I * R; ++c) {
            ++ps.cells;
            if (!out[c].error.empty()) {
                ++ps.failed;
                continue;
            }
            ps.hit_rate += out[c].hit_rate;
            ps.fetch_rate += out[c].fetch_rate;
            ps.regret += out[c].regret;
            ps.alpha_regret += out[c].alpha_regret;
        }
        const int ok = ps.cells - ps.failed;
        if (ok > 0) {
            ps.hit_rate /= ok;
            ps.fetch_rate /= ok;
            ps.regret /= ok;
            ps.alpha_regret /= ok;
        }
        s.policies.push_back(ps);
    }
    s.cells = std::move(out);

    if (!config.output_dir.empty()) {
        std::filesystem::create_directories(config.output_dir);
        const std::filesystem::path dir(config.output_dir);
        for (std::size_t c = 0; c < cells; ++c) {
            const auto& cell = s.cells[c];
            std::vector<MetricRow> rows;
            long long ch = 0, cf = 0;
            for (std::size_t q = 0; q < series[c].hits.size(); ++q) {
                ch += series[c].hits[q];
                cf += series[c].fetches[q];
                rows.push_back({cell.begin + q + 1, cell.policy, series[c].hits[q],
                                series[c].fetches[q], ch, cf});
            }
            auto f = open_output((dir / ("metrics_" + cell.policy + "_i" +
                                         std::to_string(cell.interval) + "_r" +
                                         std::to_string(cell.replicate) + ".csv"))
                                     .string());
            write_metrics_csv(f, rows);
        }
        auto f = open_output((dir / "summary.json").string());
        f << summary_to_json(s);
    }
    return s;
}

}  // namespace leadcache
