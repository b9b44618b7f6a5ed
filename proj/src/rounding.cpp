#include "leadcache/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "leadcache/random.hpp"

namespace leadcache {

namespace {

constexpr double kIntegral = 1e-9;

bool fractional(double v) { return v > kIntegral && v < 1.0 - kIntegral; }

double snap(double v)
{
    if (v <= kIntegral)
        return 0.0;
    if (v >= 1.0 - kIntegral)
        return 1.0;
    return v;
}

// Real files first (by id), then the dummy pieces of min(1, remaining) each.
std::vector<double> cache_vector(const FractionalAllocation& frac, CacheId j)
{
    const std::size_t s = frac.files.size();
    std::vector<double> v(s);
    for (std::size_t l = 0; l < s; ++l)
        v[l] = frac.y_at(j, l);
    double rem = frac.slack[j];
    while (rem > kIntegral) {
        const double piece = std::min(1.0, rem);
        v.push_back(piece);
        rem -= piece;
    }
    return v;
}

}  // namespace

double approximation_factor(int max_user_degree)
{
    if (max_user_degree <= 1)
        return 1.0;
    const double d = max_user_degree;
    return 1.0 - std::pow(1.0 - 1.0 / d, d);
}

SurrogateEvaluator::SurrogateEvaluator(std::span<const Coefficient> theta_plus,
                                       const BipartiteNetwork& net)
    : net_(&net)
{
    std::map<std::pair<UserId, FileId>, double> merged;
    for (const auto& c : theta_plus)
        if (c.value > 0.0)
            merged[{c.user, c.file}] += c.value;
    for (const auto& [k, v] : merged)
        theta_.push_back({k.first, k.second, v});
}

template <class Term>
double SurrogateEvaluator::accumulate(const FractionalAllocation& y, Term term) const
{
    double total = 0.0;
    std::vector<double> vals;
    for (const auto& c : theta_) {
        vals.clear();
        for (CacheId j : net_->user_caches(c.user))
            vals.push_back(y.y_of(j, c.file));
        total += c.value * term(vals);
    }
    return total;
}

double SurrogateEvaluator::phi(const FractionalAllocation& y) const
{
    return accumulate(y, [](const std::vector<double>& v) {
        double prod = 1.0;
        for (double x : v)
            prod *= 1.0 - x;
        return 1.0 - prod;
    });
}

double SurrogateEvaluator::L(const FractionalAllocation& y) const
{
    return accumulate(y, [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v)
            s += x;
        return std::min(1.0, s);
    });
}

double SurrogateEvaluator::alpha() const { return approximation_factor(net_->max_user_degree()); }

CacheConfiguration integral_part(const FractionalAllocation& frac)
{
    CacheConfiguration out(frac.num_caches, frac.capacity);
    for (CacheId j = 0; j < frac.num_caches; ++j) {
        std::vector<FileId> held;
        for (std::size_t l = 0; l < frac.files.size(); ++l)
            if (frac.y_at(j, l) >= 1.0 - kIntegral)
                held.push_back(frac.files[l]);
        out.assign(j, std::move(held));
    }
    return out;
}

CacheConfiguration pipage_round(const FractionalAllocation& frac, const SurrogateEvaluator& eval,
                                std::vector<double>* phi_trace)
{
    const BipartiteNetwork& net = eval.network();
    const int m = frac.num_caches;
    const std::size_t s = frac.files.size();
    if (m != net.num_caches())
        throw InvalidArgument("pipage_round: cache count mismatch");
    for (CacheId j = 0; j < m; ++j) {
        const double mass = frac.mass(j);
        if (std::abs(mass - std::round(mass)) > 1e-6)
            throw PreconditionError("pipage_round: cache " + std::to_string(j) +
                                    " has non-integral mass " + std::to_string(mass));
    }

    std::vector<std::vector<double>> y(m);
    for (CacheId j = 0; j < m; ++j) {
        y[j] = cache_vector(frac, j);
        for (double& v : y[j])
            v = snap(v);
    }

    // Coefficients indexed by (file index, user).
    std::vector<std::vector<std::pair<UserId, double>>> by_file(s);
    for (const auto& c : eval.coefficients()) {
        auto it = std::lower_bound(frac.files.begin(), frac.files.end(), c.file);
        if (it != frac.files.end() && *it == c.file)
            by_file[static_cast<std::size_t>(it - frac.files.begin())].emplace_back(c.user,
                                                                                  c.value);
    }

    FractionalAllocation work = frac;
    auto sync = [&](CacheId j, std::size_t l) {
        if (l < s)
            work.y_at(j, l) = y[j][l];
    };
    for (CacheId j = 0; j < m; ++j)
        for (std::size_t l = 0; l < s; ++l)
            sync(j, l);
    if (phi_trace)
        phi_trace->push_back(eval.phi(work));

    // Change of phi when coordinate (j, l) moves from its current value to v.
    auto delta = [&](CacheId j, std::size_t l, double v) {
        if (l >= s)
            return 0.0;
        double d = 0.0;
        const double old = y[j][l];
        for (const auto& [user, coef] : by_file[l]) {
            if (!net.connected(user, j))
                continue;
            double others = 1.0;
            for (CacheId k : net.user_caches(user))
                if (k != j)
                    others *= 1.0 - y[k][l];
            d += coef * others * (v - old);
        }
        return d;
    };

    std::size_t limit = 1;
    for (const auto& v : y)
        limit += v.size();
    for (std::size_t iter = 0; iter < limit; ++iter) {
        CacheId j = -1;
        std::size_t a = 0, b = 0;
        for (CacheId c = 0; c < m && j < 0; ++c) {
            int found = 0;
            for (std::size_t l = 0; l < y[c].size() && found < 2; ++l)
                if (fractional(y[c][l]))
                    (found++ == 0 ? a : b) = l;
            if (found == 2)
                j = c;
        }
        if (j < 0)
            break;
        const double y1 = y[j][a], y2 = y[j][b];
        const double e1 = std::min(y1, 1.0 - y2);
        const double e2 = std::min(1.0 - y1, y2);
        const double alpha_gain = delta(j, a, y1 - e1) + delta(j, b, y2 + e1);
        const double beta_gain = delta(j, a, y1 + e2) + delta(j, b, y2 - e2);
        if (alpha_gain > beta_gain) {
            y[j][a] = e1 == y1 ? 0.0 : snap(y1 - e1);
            y[j][b] = e1 == y1 ? snap(y2 + e1) : 1.0;
        } else {
            y[j][a] = e2 == y2 ? snap(y1 + e2) : 1.0;
            y[j][b] = e2 == y2 ? 0.0 : snap(y2 - e2);
        }
        sync(j, a);
        sync(j, b);
        if (phi_trace)
            phi_trace->push_back(eval.phi(work));
    }

    CacheConfiguration out(m, frac.capacity);
    for (CacheId j = 0; j < m; ++j) {
        std::vector<FileId> held;
        for (std::size_t l = 0; l < s; ++l)
            if (y[j][l] >= 0.5)  // a lone leftover fractional entry rounds to nearest
                held.push_back(frac.files[l]);
        if (static_cast<int>(held.size()) > frac.capacity)
            held.resize(frac.capacity);
        out.assign(j, std::move(held));
    }
    return out;
}

std::vector<int> madow_sample(std::span<const double> p, int count, double u)
{
    if (count < 0)
        throw FeasibilityError("madow_sample: negative sample size");
    double total = 0.0;
    for (double v : p) {
        if (!(v >= -1e-9 && v <= 1.0 + 1e-9))
            throw FeasibilityError("madow_sample: probability outside [0, 1]");
        total += std::clamp(v, 0.0, 1.0);
    }
    if (std::abs(total - count) > 1e-9 * std::max(1, count))
        throw FeasibilityError("madow_sample: probabilities sum to " + std::to_string(total) +
                               ", expected " + std::to_string(count));
    if (!(u >= 0.0 && u < 1.0))
        throw InvalidArgument("madow_sample: u must lie in [0, 1)");

    std::vector<double> cum(p.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        acc += std::clamp(p[k], 0.0, 1.0);
        cum[k] = acc;
    }
    std::vector<int> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double point = u + i;
        auto k = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), point) - cum.begin());
        if (k >= p.size() || (!out.empty() && static_cast<int>(k) <= out.back())) {
            // Rounding noise at the top end: take the next unused positive entry.
            k = out.empty() ? 0 : static_cast<std::size_t>(out.back() + 1);
            while (k < p.size() && p[k] <= 0.0)
                ++k;
            if (k >= p.size())
                throw FeasibilityError("madow_sample: ran out of mass");
        }
        out.push_back(static_cast<int>(k));
    }
    return out;
}

RoundedAction madow_round(const FractionalAllocation& frac, const BipartiteNetwork& net,
                          std::uint64_t seed)
{
    const std::size_t s = frac.files.size();
    RoundedAction out{CacheConfiguration(frac.num_caches, frac.capacity), {}};
    for (CacheId j = 0; j < frac.num_caches; ++j) {
        const auto p = cache_vector(frac, j);
        const double u = hash_to_unit(derive_seed(seed, {static_cast<std::uint64_t>(j)}));
        std::vector<FileId> held;
        for (int k : madow_sample(p, frac.capacity, u))
            if (static_cast<std::size_t>(k) < s)
                held.push_back(frac.files[k]);
        out.config.assign(j, std::move(held));
    }
    out.z = covered_pairs(net, out.config, frac.z);
    return out;
}

RoundedAction replacement_round(const FractionalAllocation& frac, const BipartiteNetwork& net,
                                std::uint64_t seed)
{
    const std::size_t s = frac.files.size();
    const double C = frac.capacity;
    RoundedAction out{CacheConfiguration(frac.num_caches, frac.capacity), {}};
    for (CacheId j = 0; j < frac.num_caches; ++j) {
        Rng rng = make_rng(derive_seed(seed, {static_cast<std::uint64_t>(j)}));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<FileId> held;
        for (int draw = 0; draw < frac.capacity; ++draw) {
            const double u = unif(rng);
            double acc = 0.0;
            for (std::size_t l = 0; l < s; ++l) {
                acc += std::clamp(frac.y_at(j, l), 0.0, 1.0) / C;
                if (u < acc) {
                    held.push_back(frac.files[l]);
                    break;
                }
            }
        }
        std::sort(held.begin(), held.end());
        held.erase(std::unique(held.begin(), held.end()), held.end());
        out.config.assign(j, std::move(held));
    }
    out.z = covered_pairs(net, out.config, frac.z);
    return out;
}

}  // namespace leadcache
