#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "dcop/copula.hpp"
#include "dcop/empirical.hpp"
#include "dcop/postprocess.hpp"
#include "dcop/subcopula.hpp"

using namespace dcop;

namespace {

std::vector<MultiIndex> permutation_cells(int m, int l, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> perms(static_cast<std::size_t>(l), std::vector<int>(static_cast<std::size_t>(m)));
    for (auto& p : perms) {
        std::iota(p.begin(), p.end(), 1);
        std::shuffle(p.begin(), p.end(), rng);
    }
    std::vector<MultiIndex> cells(static_cast<std::size_t>(m), MultiIndex(static_cast<std::size_t>(l)));
    for (int k = 0; k < m; ++k) {
        for (int axis = 0; axis < l; ++axis) cells[k][axis] = perms[axis][k];
    }
    return cells;
}

EnsembleForecast ensemble(int m, int l, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(l)));
    for (auto& r : rows) {
        for (auto& x : r) x = z(rng);
    }
    std::vector<std::string> ids;
    for (int k = 0; k < l; ++k) ids.push_back("T2M:s" + std::to_string(k) + ":24h");
    return EnsembleForecast(rows, ids);
}

}  // namespace

// Dense prefix sums over the (M+1)^L grid, L = 3.
void BM_ArrayToCopula(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    std::map<MultiIndex, Rational> entries;
    for (int t = 0; t < 3; ++t) {
        for (const auto& c : permutation_cells(m, 3, 10 + t)) entries[c] += Rational(1, 3);
    }
    const StochasticArray a(m, 3, entries);
    for (auto _ : state) benchmark::DoNotOptimize(array_to_copula(a));
    state.SetComplexityN(m);
}
BENCHMARK(BM_ArrayToCopula)->RangeMultiplier(2)->Range(4, 32)->Complexity();

// Extension from the coarse grid {0, M/2, M} on every axis.
void BM_Extend(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const int l = 3;
    const auto d = DiscreteCopula::from_tuples(m, l, permutation_cells(m, l, 7));
    const auto sub = restrict_to(d, std::vector<std::vector<int>>(l, {0, m / 2, m}));
    for (auto _ : state) benchmark::DoNotOptimize(extend(sub));
}
BENCHMARK(BM_Extend)->RangeMultiplier(4)->Range(8, 512);

// ECC for M = 50 members over many margins.
void BM_Ecc(benchmark::State& state) {
    const int l = static_cast<int>(state.range(0));
    const auto raw = ensemble(50, l, 3);
    std::vector<std::vector<double>> samples;
    for (int k = 0; k < l; ++k) samples.push_back(quantize(PredictiveDistribution::gaussian(0, 1), 50));
    const Parallelism par{static_cast<unsigned>(state.range(1))};
    for (auto _ : state) benchmark::DoNotOptimize(ecc(raw, samples, TiePolicy::error(), par));
    state.SetItemsProcessed(state.iterations() * l);
}
BENCHMARK(BM_Ecc)->Args({10, 1})->Args({100, 1})->Args({1000, 1})->Args({1000, 4})->UseRealTime();

// Sparse empirical copula evaluation at a grid point, O(M L) per query.
void BM_EmpiricalValue(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const auto e = empirical_copula(ensemble(m, 5, 4).as_sample());
    const MultiIndex at(5, m / 2);
    for (auto _ : state) benchmark::DoNotOptimize(e.value(at));
    state.SetComplexityN(m);
}
BENCHMARK(BM_EmpiricalValue)->RangeMultiplier(4)->Range(16, 4096)->Complexity();
BENCHMARK_MAIN();
