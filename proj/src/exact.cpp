#include "leadcache/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace leadcache {

std::vector<FileId> positive_support(std::span<const Coefficient> theta)
{
    std::vector<FileId> files;
    for (const auto& c : theta)
        if (c.value > 0.0)
            files.push_back(c.file);
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());
    return files;
}

double configuration_count(std::size_t candidates, int capacity, int num_caches)
{
    const std::size_t k = std::min<std::size_t>(capacity, candidates);
    // log C(s, k) via lgamma keeps huge counts finite.
    const double log_binom = std::lgamma(candidates + 1.0) - std::lgamma(k + 1.0) -
                             std::lgamma(candidates - k + 1.0);
    return std::exp(log_binom * num_caches);
}

namespace {

class BranchAndBound {
public:
    BranchAndBound(std::span<const Coefficient> theta, const BipartiteNetwork& net, int capacity,
                   std::vector<FileId> files)
        : net_(net), files_(std::move(files)), s_(files_.size()),
          k_(std::min<std::size_t>(capacity, s_)), capacity_(capacity), m_(net.num_caches()), n_(net.num_users()),
          weight_(static_cast<std::size_t>(n_) * s_, 0.0), cover_(weight_.size(), 0),
          chosen_(m_), best_(m_)
    {
        double total = 0.0;
        for (const auto& c : theta) {
            if (c.value <= 0.0)
                continue;
            auto it = std::lower_bound(files_.begin(), files_.end(), c.file);
            if (it == files_.end() || *it != c.file)
                continue;
            weight_[c.user * s_ + (it - files_.begin())] += c.value;
            total += c.value;
        }
        eps_ = 1e-9 * std::max(1.0, total);
        gains_.resize(s_);
        order_.resize(s_);
    }

    ExactResult run()
    {
        greedy_incumbent();
        if (m_ > 0 && k_ > 0)
            search(0, 0.0);
        ExactResult out;
        out.config = CacheConfiguration(m_, capacity_);
        for (int j = 0; j < m_; ++j) {
            std::vector<FileId> fs;
            for (auto l : best_[j])
                fs.push_back(files_[l]);
            out.config.assign(j, std::move(fs));
        }
        out.value = best_value_;
        out.nodes = nodes_;
        return out;
    }

private:
    void compute_gains(int j)
    {
        std::fill(gains_.begin(), gains_.end(), 0.0);
        for (UserId i : net_.cache_users(j)) {
            const double* w = &weight_[i * s_];
            const int* c = &cover_[i * s_];
            for (std::size_t l = 0; l < s_; ++l)
                if (c[l] == 0)
                    gains_[l] += w[l];
        }
    }

    // Top-k local indices by gain, ties toward the smaller index; returned
    // sorted ascending along with their gain sum.
    double top_k(std::vector<std::size_t>& pick)
    {
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::partial_sort(order_.begin(), order_.begin() + k_, order_.end(),
                          [&](std::size_t a, std::size_t b) {
                              return gains_[a] > gains_[b] || (gains_[a] == gains_[b] && a < b);
                          });
        pick.assign(order_.begin(), order_.begin() + k_);
        std::sort(pick.begin(), pick.end());
        double sum = 0.0;
        for (auto l : pick)
            sum += gains_[l];
        return sum;
    }

    double top_k_sum()
    {
        std::vector<std::size_t> tmp;
        return top_k(tmp);
    }

    void apply(int j, const std::vector<std::size_t>& pick, int delta)
    {
        for (UserId i : net_.cache_users(j))
            for (auto l : pick)
                cover_[i * s_ + l] += delta;
    }

    double remaining_bound(int from)
    {
        double b = 0.0;
        for (int j = from; j < m_; ++j) {
            compute_gains(j);
            b += top_k_sum();
        }
        return b;
    }

    void greedy_incumbent()
    {
        double value = 0.0;
        for (int j = 0; j < m_; ++j) {
            compute_gains(j);
            value += top_k(chosen_[j]);
            apply(j, chosen_[j], +1);
        }
        for (int j = 0; j < m_; ++j)
            apply(j, chosen_[j], -1);
        best_ = chosen_;
        best_value_ = value;
    }

    // Lexicographic comparison of chosen_[0..j] with best_[0..j].
    int compare_prefix(int j) const
    {
        for (int q = 0; q <= j; ++q) {
            if (chosen_[q] < best_[q])
                return -1;
            if (best_[q] < chosen_[q])
                return 1;
        }
        return 0;
    }

    void offer(double value)
    {
        const bool better = value > best_value_ + eps_;
        const bool tie_smaller =
            !better && value >= best_value_ - eps_ && compare_prefix(m_ - 1) < 0;
        if (better || tie_smaller) {
            best_value_ = better ? value : std::max(value, best_value_);
            best_ = chosen_;
        }
    }

    bool prune(int j, double bound)
    {
        if (bound < best_value_ - eps_)
            return true;
        return bound <= best_value_ + eps_ && compare_prefix(j) > 0;
    }

    void search(int j, double value)
    {
        ++nodes_;
        compute_gains(j);
        if (j == m_ - 1) {
            const double g = top_k(chosen_[j]);
            offer(value + g);
            return;
        }
        const std::vector<double> gains = gains_;
        std::vector<std::size_t> idx(k_);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        while (true) {
            double g = 0.0;
            for (auto l : idx)
                g += gains[l];
            chosen_[j] = idx;
            apply(j, idx, +1);
            const double bound = value + g + remaining_bound(j + 1);
            if (!prune(j, bound))
                search(j + 1, value + g);
            apply(j, idx, -1);
            // Next k-combination in lexicographic order.
            std::size_t p = k_;
            while (p > 0 && idx[p - 1] == s_ - k_ + (p - 1))
                --p;
            if (p == 0)
                break;
            ++idx[p - 1];
            for (std::size_t q = p; q < k_; ++q)
                idx[q] = idx[q - 1] + 1;
        }
    }

    const BipartiteNetwork& net_;
    std::vector<FileId> files_;
    std::size_t s_;
    std::size_t k_;
    int capacity_;
    int m_;
    int n_;
    std::vector<double> weight_;
    std::vector<int> cover_;
    std::vector<double> gains_;
    std::vector<std::size_t> order_;
    std::vector<std::vector<std::size_t>> chosen_;
    std::vector<std::vector<std::size_t>> best_;
    double best_value_ = 0.0;
    double eps_ = 1e-9;
    std::size_t nodes_ = 0;
};

}  // namespace

ExactResult exact_ilp(std::span<const Coefficient> theta, const BipartiteNetwork& net, int capacity,
                      double budget, std::span<const FileId> candidates)
{
    if (capacity < 1)
        throw InvalidArgument("exact_ilp: capacity must be >= 1");
    std::vector<FileId> files;
    if (candidates.empty()) {
        files = positive_support(theta);
    } else {
        files.assign(candidates.begin(), candidates.end());
        std::sort(files.begin(), files.end());
        files.erase(std::unique(files.begin(), files.end()), files.end());
    }
    const double count = configuration_count(files.size(), capacity, net.num_caches());
    if (count > budget)
        throw BudgetExceeded("exact_ilp: " + std::to_string(count) +
                             " configurations exceed the enumeration budget; use the LP upper bound "
                             "(hindsight_upper_bound) instead");
    for (const auto& c : theta)
        if (c.user < 0 || c.user >= net.num_users())
            throw InvalidArgument("exact_ilp: coefficient user out of range");
    BranchAndBound bb(theta, net, capacity, std::move(files));
    return bb.run();
}

double placement_value(std::span<const Coefficient> theta, const BipartiteNetwork& net,
                       const CacheConfiguration& y)
{
    double total = 0.0;
    for (const auto& c : theta) {
        if (c.value <= 0.0)
            continue;
        for (CacheId j : net.user_caches(c.user))
            if (y.holds(j, c.file)) {
                total += c.value;
                break;
            }
    }
    return total;
}

}  // namespace leadcache
