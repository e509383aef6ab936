// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "switchfolio/baselines.hpp"
#include "switchfolio/kernels.hpp"
#include "switchfolio/switching.hpp"

using namespace switchfolio;

namespace {

PriceRelativeMatrix market(std::size_t days, std::size_t assets, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.9, 1.1);
    std::vector<std::vector<double>> rows(days, std::vector<double>(assets));
    for (auto& r : rows)
        for (auto& v : r) v = u(rng);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < assets; ++i) names.push_back("s" + std::to_string(i));
    return PriceRelativeMatrix::from_rows(rows, names);
}

struct BucketFixture {
    std::vector<double> buckets, survive, hazard;
    explicit BucketFixture(std::size_t n) : buckets(n, 1e-3), survive(n + 2), hazard(n + 2) {
        for (std::size_t a = 0; a < survive.size(); ++a) {
            hazard[a] = gamma_hat(a);
            survive[a] = 1.0 - hazard[a];
        }
    }
};

void BM_AdvanceBucketsReference(benchmark::State& state) {
    BucketFixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto s = kernels::advance_buckets_reference(f.buckets, f.buckets.size() - 1, f.survive, f.hazard, 1.0);
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AdvanceBucketsParallel(benchmark::State& state) {
    BucketFixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto s = kernels::advance_buckets(f.buckets, f.buckets.size() - 1, f.survive, f.hazard, 1.0);
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_AdvanceBucketsReference)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_AdvanceBucketsParallel)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

void BM_MeanCrpReference(benchmark::State& state) {
    const auto x = market(250, 3, 1);
    const auto count = static_cast<std::size_t>(state.range(0));
    const auto w = sample_simplex(count, 3, 2);
    const auto cost = CostModel::parallel(0.02);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::mean_crp_reference(w, count, x, cost));
}

void BM_MeanCrpParallel(benchmark::State& state) {
    const auto x = market(250, 3, 1);
    const auto count = static_cast<std::size_t>(state.range(0));
    const auto w = sample_simplex(count, 3, 2);
    const auto cost = CostModel::parallel(0.02);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::mean_crp(w, count, x, cost));
}

BENCHMARK(BM_MeanCrpReference)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MeanCrpParallel)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_AdaptiveRun(benchmark::State& state) {
    const auto x = market(5651, 3, 3);
    const auto mode = state.range(0) ? KernelMode::parallel : KernelMode::reference;
    for (auto _ : state) {
        AdaptiveState s(3, mode);
        for (std::size_t t = 0; t < x.days(); ++t) s.step(x.row(t));
        benchmark::DoNotOptimize(s.log_total_wealth());
    }
    state.SetLabel(state.range(0) ? "parallel" : "reference");
}

BENCHMARK(BM_AdaptiveRun)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
