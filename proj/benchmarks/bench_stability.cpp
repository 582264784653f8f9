#include <benchmark/benchmark.h>

#include "dpnls/model.hpp"
#include "dpnls/stability.hpp"

using namespace dpnls;

// the core quantity: one mass-derivative evaluation at moderate frequency
static void BM_Dmass(benchmark::State& state) {
    const Nonlinearity nl{2.0, 3.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(dmass(nl, 0.3));
    }
}
BENCHMARK(BM_Dmass);

// same quantity deep in the small-frequency boundary layer, where the
// integrand is nearly degenerate and the split quadrature has to work
static void BM_DmassSmallOmega(benchmark::State& state) {
    const Nonlinearity nl{2.0, 3.0};
    const double omega = critical_points(nl).omega0 * 1e-4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(dmass(nl, omega));
    }
}
BENCHMARK(BM_DmassSmallOmega);

static void BM_FFamily(benchmark::State& state) {
    const Nonlinearity nl{3.0, 4.0};
    const int j = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(f_family(nl, 2.0, j));
    }
}
BENCHMARK(BM_FFamily)->Arg(0)->Arg(1)->Arg(2);

// full threshold root-find for a sharp-regime pair
static void BM_Threshold(benchmark::State& state) {
    const Nonlinearity nl{3.0, 4.0};
    for (auto _ : state) {
        auto th = threshold(nl);
        benchmark::DoNotOptimize(th->omega_star);
    }
}
BENCHMARK(BM_Threshold);

// end-to-end classification including the 24-point numeric sign scan
static void BM_Classify(benchmark::State& state) {
    const Nonlinearity nl{2.0, 3.0};
    for (auto _ : state) {
        auto rep = classify(nl);
        benchmark::DoNotOptimize(rep.regime);
    }
}
BENCHMARK(BM_Classify);

BENCHMARK_MAIN();
