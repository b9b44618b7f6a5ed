#include <benchmark/benchmark.h>

#include <random>

#include "leadcache/kernels.hpp"
#include "leadcache/random.hpp"
#include "leadcache/rounding.hpp"

using namespace leadcache;
namespace k = leadcache::kernels;

namespace {

k::Rows make_rows(std::size_t r, std::size_t c)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    k::Rows rows(r, std::vector<double>(c));
    for (auto& row : rows)
        for (double& v : row)
            v = u(rng);
    return rows;
}

template <bool Parallel>
void BM_Pivot(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    auto rows = make_rows(n, 2 * n);
    std::vector<double> obj(2 * n, 1.0);
    std::size_t r = 0;
    for (auto _ : state) {
        const std::size_t col = (r * 7) % (2 * n);
        rows[r][col] = 1.5;
        if constexpr (Parallel)
            k::parallel::pivot(rows, obj, r, col);
        else
            k::serial::pivot(rows, obj, r, col);
        r = (r + 1) % n;
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * n * 2 * n);
}

template <bool Parallel>
void BM_ReducedCosts(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto rows = make_rows(n, 2 * n);
    std::vector<double> cost(2 * n, 1.0), basic(n, 0.5), out;
    for (auto _ : state) {
        if constexpr (Parallel)
            k::parallel::reduced_costs(rows, cost, basic, out);
        else
            k::serial::reduced_costs(rows, cost, basic, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void BM_TopBins(benchmark::State& state)
{
    for (auto _ : state) {
        auto v = Parallel ? k::parallel::top_bins_load(2, 1, 1000, state.range(0), 3)
                          : k::serial::top_bins_load(2, 1, 1000, state.range(0), 3);
        benchmark::DoNotOptimize(v.data());
    }
}

template <bool Parallel>
void BM_MadowIndicators(benchmark::State& state)
{
    const std::vector<double> p{0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3};
    auto sample = [&](std::int64_t d, std::vector<char>& out) {
        for (int i : madow_sample(p, 3, hash_to_unit(derive_seed(9, {std::uint64_t(d)}))))
            out[i] = 1;
    };
    std::vector<std::int64_t> counts(p.size());
    for (auto _ : state) {
        std::fill(counts.begin(), counts.end(), 0);
        if constexpr (Parallel)
            k::parallel::count_indicators(state.range(0), p.size(), sample, counts);
        else
            k::serial::count_indicators(state.range(0), p.size(), sample, counts);
        benchmark::DoNotOptimize(counts.data());
    }
}

}  // namespace

BENCHMARK(BM_Pivot<false>)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_Pivot<true>)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_ReducedCosts<false>)->Arg(256)->Arg(512);
BENCHMARK(BM_ReducedCosts<true>)->Arg(256)->Arg(512);
BENCHMARK(BM_TopBins<false>)->Arg(1000);
BENCHMARK(BM_TopBins<true>)->Arg(1000);
BENCHMARK(BM_MadowIndicators<false>)->Arg(100000);
BENCHMARK(BM_MadowIndicators<true>)->Arg(100000);

BENCHMARK_MAIN();
