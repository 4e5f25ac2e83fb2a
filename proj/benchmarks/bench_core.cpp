// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "icc_cta/channel.hpp"
#include "icc_cta/detect.hpp"
#include "icc_cta/estimate.hpp"
#include "icc_cta/icc_code.hpp"

using namespace icc_cta;

static void BM_OneRingCovariance(benchmark::State& state) {
    OneRingModel m;
    m.n_t = static_cast<int>(state.range(0));
    m.l_taps = 4;
    for (auto _ : state) {
        auto cov = one_ring_covariance(m);
        benchmark::DoNotOptimize(cov.entries.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OneRingCovariance)->RangeMultiplier(2)->Range(32, 256)->Complexity();

static void BM_UnrankLargeCodebook(benchmark::State& state) {
    IccCode code(167, 127);
    binomial(167, 147); // warm the table outside the loop
    Rng rng(1);
    for (auto _ : state) {
        BigInt i = rng.next_u64() % code.size();
        auto cw = code.unrank(i);
        benchmark::DoNotOptimize(cw.bits.data());
    }
}
BENCHMARK(BM_UnrankLargeCodebook);

static void BM_EigenratioStatistics(benchmark::State& state) {
    const int n_t = static_cast<int>(state.range(0));
    Rng rng(2);
    Eigen::MatrixXcd y(3, n_t);
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < n_t; ++i)
            y(k, i) = rng.cgaussian();
    for (auto _ : state) {
        auto stats = eigenratio_statistics(y, 1.0);
        benchmark::DoNotOptimize(stats);
    }
}
BENCHMARK(BM_EigenratioStatistics)->RangeMultiplier(2)->Range(32, 256);

static void BM_DecisionMetric(benchmark::State& state) {
    const int n_t = static_cast<int>(state.range(0));
    OneRingModel m;
    m.n_t = n_t;
    m.l_taps = 4;
    const auto agg = one_ring_covariance(m).to_aggregate(m.l_taps);
    const auto f = dft_submatrix(64, 4, {0, 16, 32, 48});
    const DecisionKernel kernel = make_decision_kernel(eig_hermitian(agg.entries, 1e-2), f);
    Rng rng(3);
    Eigen::RowVectorXcd h(n_t * 4);
    for (Eigen::Index i = 0; i < h.size(); ++i)
        h(i) = rng.cgaussian();
    for (auto _ : state) {
        double v = decision_metric(h, kernel);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_DecisionMetric)->RangeMultiplier(2)->Range(32, 256);

BENCHMARK_MAIN();
