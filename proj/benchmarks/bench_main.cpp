#include <benchmark/benchmark.h>

#include <vector>

#include "wavesel/forest.hpp"
#include "wavesel/importance.hpp"
#include "wavesel/rng.hpp"
#include "wavesel/wavelets.hpp"

using namespace wavesel;

namespace {

Dataset make_data(std::size_t n, std::size_t p) {
    Rng rng(1);
    std::vector<std::vector<double>> cols(p, std::vector<double>(n));
    std::vector<double> y(n);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < p; ++j) {
        names.push_back("x" + std::to_string(j));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            cols[j][i] = rng.normal();
        }
        y[i] = cols[0][i] + 0.5 * cols[1 % p][i] + rng.normal();
    }
    return Dataset::from_columns(cols, y, names);
}

void BM_FitForest(benchmark::State& state) {
    const auto data = make_data(static_cast<std::size_t>(state.range(0)), 16);
    ForestConfig config;
    config.num_trees = 50;
    config.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_forest(data, config));
    }
}
BENCHMARK(BM_FitForest)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_GroupedImportance(benchmark::State& state) {
    const auto data = make_data(1000, 16);
    ForestConfig config;
    config.num_trees = 50;
    config.threads = 1;
    const auto forest = fit_forest(data, config);
    ImportanceOptions opts;
    opts.threads = 1;
    const Group group{"g", {0, 1, 2, 3}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(grouped_importance(forest, data, group, opts));
    }
}
BENCHMARK(BM_GroupedImportance)->Unit(benchmark::kMillisecond);

void BM_Dwt(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(2);
    std::vector<double> x(n);
    for (auto& v : x) {
        v = rng.normal();
    }
    const auto f = WaveletFilter::daubechies(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dwt(x, f));
    }
}
BENCHMARK(BM_Dwt)->Arg(256)->Arg(1024)->Arg(4096);

} // namespace
BENCHMARK_MAIN();
