#include <benchmark/benchmark.h>

#include <vector>

#include "ebfdr/binning.hpp"
#include "ebfdr/encoding.hpp"
#include "ebfdr/fdr_eb.hpp"
#include "ebfdr/mixture_fit.hpp"
#include "ebfdr/rng_dist.hpp"
#include "ebfdr/simulation.hpp"
#include "ebfdr/transforms.hpp"

using namespace ebfdr;

namespace {

ExperimentInstance instance(std::size_t n) {
    ScenarioSpec spec;
    spec.n = n;
    spec.seed = 1;
    return gen_scenario(spec);
}

void BM_NormQuantile(benchmark::State& state) {
    RngStream rng(1, 0);
    std::vector<double> q(4096);
    for (double& v : q) v = rng.uniform();
    for (auto _ : state) {
        double acc = 0.0;
        for (double v : q) acc += norm_quantile(v);
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(q.size()));
}
BENCHMARK(BM_NormQuantile);

void BM_NormCdf(benchmark::State& state) {
    RngStream rng(2, 0);
    std::vector<double> x(4096);
    for (double& v : x) v = 8.0 * rng.uniform() - 4.0;
    for (auto _ : state) {
        double acc = 0.0;
        for (double v : x) acc += norm_cdf(v);
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(x.size()));
}
BENCHMARK(BM_NormCdf);

void BM_GenerateS1(benchmark::State& state) {
    ScenarioSpec spec;
    spec.n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(gen_scenario(spec));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateS1)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_PTypeEncode(benchmark::State& state) {
    const auto inst = instance(1000000);
    for (auto _ : state) benchmark::DoNotOptimize(p_type_encode(inst.pvalues, static_cast<int>(state.range(0))));
    state.SetItemsProcessed(state.iterations() * 1000000);
}
BENCHMARK(BM_PTypeEncode)->Arg(8)->Arg(17)->Unit(benchmark::kMillisecond);

void BM_TTypeEncode(benchmark::State& state) {
    const auto inst = instance(1000000);
    for (auto _ : state) benchmark::DoNotOptimize(t_type_encode(inst.tstats, static_cast<int>(state.range(0))));
    state.SetItemsProcessed(state.iterations() * 1000000);
}
BENCHMARK(BM_TTypeEncode)->Arg(7)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ZScoresAndBins(benchmark::State& state) {
    const auto inst = instance(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const auto z = collect_zscores(inst.pvalues);
        const auto bins = make_bins(z.finite, bin_count(BinRule::Sturges, z.finite));
        benchmark::DoNotOptimize(bin_counts(z, bins));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ZScoresAndBins)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_BinnedEm(benchmark::State& state) {
    const auto inst = instance(1000000);
    const auto z = collect_zscores(inst.pvalues);
    const auto bins = make_bins(z.finite, bin_count(BinRule::Sturges, z.finite));
    const auto counts = bin_counts(z, bins);
    EmConfig cfg;
    cfg.n_starts = 1;
    cfg.accelerate = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(fit_binned_em(counts, bins, cfg));
}
BENCHMARK(BM_BinnedEm)->ArgName("accelerate")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RawEm(benchmark::State& state) {
    const auto inst = instance(static_cast<std::size_t>(state.range(0)));
    const auto z = collect_zscores(inst.pvalues);
    EmConfig cfg;
    cfg.n_starts = 1;
    for (auto _ : state) benchmark::DoNotOptimize(fit_raw_em(z.finite, cfg));
}
BENCHMARK(BM_RawEm)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_EbControl(benchmark::State& state) {
    const auto inst = instance(100000);
    for (auto _ : state) benchmark::DoNotOptimize(eb_control(inst.pvalues, 0.05, BinRule::Sturges, EmConfig{}));
}
BENCHMARK(BM_EbControl)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
