#include "leadcache/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <omp.h>

#include "leadcache/random.hpp"

namespace leadcache::kernels {

namespace {

constexpr double kFlush = 1e-13;

// Scales the pivot row and returns the indices of its nonzeros.
std::vector<std::size_t> prepare_pivot_row(std::vector<double>& prow, std::size_t col)
{
    const double inv = 1.0 / prow[col];
    std::vector<std::size_t> nz;
    for (std::size_t c = 0; c < prow.size(); ++c) {
        if (prow[c] == 0.0)
            continue;
        prow[c] *= inv;
        if (std::abs(prow[c]) < kFlush)
            prow[c] = 0.0;
        else
            nz.push_back(c);
    }
    prow[col] = 1.0;
    return nz;
}

inline void eliminate(std::vector<double>& row, const std::vector<double>& prow,
                      const std::vector<std::size_t>& nz, std::size_t col)
{
    const double f = row[col];
    if (f == 0.0)
        return;
    for (std::size_t c : nz) {
        double v = row[c] - f * prow[c];
        row[c] = std::abs(v) < kFlush ? 0.0 : v;
    }
    row[col] = 0.0;
}

std::int64_t top_load_trial(int bins, int top, std::int64_t balls, std::uint64_t seed,
                            std::int64_t trial, std::vector<std::int64_t>& load)
{
    Rng rng = make_rng(derive_seed(seed, {static_cast<std::uint64_t>(trial)}));
    std::uniform_int_distribution<int> pick(0, bins - 1);
    load.assign(bins, 0);
    for (std::int64_t b = 0; b < balls; ++b)
        ++load[pick(rng)];
    std::partial_sort(load.begin(), load.begin() + top, load.end(), std::greater<>());
    std::int64_t sum = 0;
    for (int k = 0; k < top; ++k)
        sum += load[k];
    return sum;
}

}  // namespace

namespace serial {

void pivot(Rows& rows, std::vector<double>& objective, std::size_t pivot_row, std::size_t col)
{
    auto& prow = rows[pivot_row];
    const auto nz = prepare_pivot_row(prow, col);
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (r != pivot_row)
            eliminate(rows[r], prow, nz, col);
    eliminate(objective, prow, nz, col);
}

void reduced_costs(const Rows& rows, std::span<const double> cost,
                   std::span<const double> basic_cost, std::vector<double>& out)
{
    out.assign(cost.begin(), cost.end());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double cb = basic_cost[r];
        if (cb == 0.0)
            continue;
        const auto& row = rows[r];
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] -= cb * row[k];
    }
}

std::vector<std::int64_t> top_bins_load(int bins, int top, std::int64_t balls, std::int64_t trials,
                                        std::uint64_t seed)
{
    std::vector<std::int64_t> out(trials);
    std::vector<std::int64_t> load;
    for (std::int64_t t = 0; t < trials; ++t)
        out[t] = top_load_trial(bins, top, balls, seed, t, load);
    return out;
}

void count_indicators(std::int64_t draws, std::size_t width,
                      const std::function<void(std::int64_t, std::vector<char>&)>& sample,
                      std::vector<std::int64_t>& counts)
{
    counts.assign(width, 0);
    std::vector<char> out(width);
    for (std::int64_t d = 0; d < draws; ++d) {
        std::fill(out.begin(), out.end(), 0);
        sample(d, out);
        for (std::size_t k = 0; k < width; ++k)
            counts[k] += out[k] != 0;
    }
}

}  // namespace serial

namespace parallel {

void pivot(Rows& rows, std::vector<double>& objective, std::size_t pivot_row, std::size_t col)
{
    if (rows.empty() || rows.size() * rows[0].size() < kParallelPivotThreshold) {
        serial::pivot(rows, objective, pivot_row, col);
        return;
    }
    auto& prow = rows[pivot_row];
    const auto nz = prepare_pivot_row(prow, col);
    const auto n = static_cast<std::int64_t>(rows.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < n; ++r)
        if (static_cast<std::size_t>(r) != pivot_row)
            eliminate(rows[r], prow, nz, col);
    eliminate(objective, prow, nz, col);
}

void reduced_costs(const Rows& rows, std::span<const double> cost,
                   std::span<const double> basic_cost, std::vector<double>& out)
{
    const auto width = static_cast<std::int64_t>(cost.size());
    out.assign(cost.begin(), cost.end());
    // Column-parallel; each column accumulates rows in the serial order.
#pragma omp parallel for schedule(static) if (rows.size() * cost.size() >= kParallelPivotThreshold)
    for (std::int64_t k = 0; k < width; ++k) {
        double v = out[k];
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (basic_cost[r] != 0.0)
                v -= basic_cost[r] * rows[r][k];
        out[k] = v;
    }
}

std::vector<std::int64_t> top_bins_load(int bins, int top, std::int64_t balls, std::int64_t trials,
                                        std::uint64_t seed)
{
    std::vector<std::int64_t> out(trials);
#pragma omp parallel
    {
        std::vector<std::int64_t> load;
#pragma omp for schedule(static)
        for (std::int64_t t = 0; t < trials; ++t)
            out[t] = top_load_trial(bins, top, balls, seed, t, load);
    }
    return out;
}

void count_indicators(std::int64_t draws, std::size_t width,
                      const std::function<void(std::int64_t, std::vector<char>&)>& sample,
                      std::vector<std::int64_t>& counts)
{
    counts.assign(width, 0);
#pragma omp parallel
    {
        std::vector<std::int64_t> local(width, 0);
        std::vector<char> out(width);
#pragma omp for schedule(static)
        for (std::int64_t d = 0; d < draws; ++d) {
            std::fill(out.begin(), out.end(), 0);
            sample(d, out);
            for (std::size_t k = 0; k < width; ++k)
                local[k] += out[k] != 0;
        }
#pragma omp critical
        for (std::size_t k = 0; k < width; ++k)
            counts[k] += local[k];
    }
}

}  // namespace parallel

}  // namespace leadcache::kernels
