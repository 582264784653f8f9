#include <benchmark/benchmark.h>

#include <cmath>

#include "dpnls/quadrature.hpp"

using dpnls::integrate;
using dpnls::SingularityHint;

// smooth integrand, no endpoint structure
static void BM_SmoothGaussian(benchmark::State& state) {
    const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    for (auto _ : state) {
        auto r = integrate([](double x) { return std::exp(-x * x); }, 0.0, 6.0, {}, tol);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_SmoothGaussian)->Arg(6)->Arg(10)->Arg(13);

// inverse-square-root blowup at the left endpoint, the shape that
// dominates every mass-type integral in the library
static void BM_InverseSqrtEndpoint(benchmark::State& state) {
    const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    SingularityHint hint;
    hint.left_exponent = 0.5;
    for (auto _ : state) {
        auto r = integrate([](double x) { return 1.0 / std::sqrt(x) + x; }, 0.0, 1.0,
                           hint, tol);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_InverseSqrtEndpoint)->Arg(6)->Arg(10)->Arg(13);

// singularities at both ends, beta-function style
static void BM_DoubleEndpoint(benchmark::State& state) {
    const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    SingularityHint hint;
    hint.left_exponent = 0.5;
    hint.right_exponent = 0.75;
    for (auto _ : state) {
        auto r = integrate(
            [](double x) { return std::pow(x, -0.5) * std::pow(1.0 - x, -0.75); }, 0.0,
            1.0, hint, tol);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_DoubleEndpoint)->Arg(6)->Arg(10);

BENCHMARK_MAIN();
