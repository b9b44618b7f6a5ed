#pragma once

// Data-parallel inner loops. Each kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::parallel; both produce
// bit-identical results (row updates are independent, Monte-Carlo draws are
// addressed by counter-derived seeds and reduced over integers).

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace leadcache::kernels {

// Dense tableau stored as independent rows.
using Rows = std::vector<std::vector<double>>;

// Gauss-Jordan elimination of column `col` using row `pivot_row`: scales the
// pivot row to a unit pivot and subtracts it from every other row (and from
// `objective`, a reduced-cost row of the same width). Entries that cancel to
// below 1e-13 in magnitude are flushed to zero.
namespace serial {
void pivot(Rows& rows, std::vector<double>& objective, std::size_t pivot_row, std::size_t col);
// d_k = c_k - sum_r basic_cost[r] * rows[r][k].
void reduced_costs(const Rows& rows, std::span<const double> cost,
                   std::span<const double> basic_cost, std::vector<double>& out);
// Per-trial load of the `top` fullest of `bins` bins after `balls` uniform throws.
std::vector<std::int64_t> top_bins_load(int bins, int top, std::int64_t balls, std::int64_t trials,
                                        std::uint64_t seed);
// counts[k] += number of draws d in [0, draws) for which sample(d, out) set
// out[k] (out is cleared to zeros before each draw).
void count_indicators(std::int64_t draws, std::size_t width,
                      const std::function<void(std::int64_t, std::vector<char>&)>& sample,
                      std::vector<std::int64_t>& counts);
}  // namespace serial

namespace parallel {
void pivot(Rows& rows, std::vector<double>& objective, std::size_t pivot_row, std::size_t col);
void reduced_costs(const Rows& rows, std::span<const double> cost,
                   std::span<const double> basic_cost, std::vector<double>& out);
std::vector<std::int64_t> top_bins_load(int bins, int top, std::int64_t balls, std::int64_t trials,
                                        std::uint64_t seed);
void count_indicators(std::int64_t draws, std::size_t width,
                      const std::function<void(std::int64_t, std::vector<char>&)>& sample,
                      std::vector<std::int64_t>& counts);
}  // namespace parallel

// Below this many tableau entries the parallel pivot falls back to serial.
inline constexpr std::size_t kParallelPivotThreshold = 1 << 16;

}  // namespace leadcache::kernels
