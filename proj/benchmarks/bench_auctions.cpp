#include "predauction/cr_auction.hpp"
#include "predauction/err_auction.hpp"
#include "predauction/quadrature.hpp"
#include "predauction/rho.hpp"
#include "predauction/verify.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace pa = predauction;

static void BM_AllocCr(benchmark::State& state)
{
    const pa::CRParams p{0.5, 0.1, 4.0, 100.0};
    double t = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pa::alloc_cr({t, 2.0, 1}, p));
        t = t < 99.0 ? t + 0.37 : 1.0;
    }
}
BENCHMARK(BM_AllocCr);

static void BM_AllocErrPolylog(benchmark::State& state)
{
    const double eps = static_cast<double>(state.range(0)) / 100.0;
    const pa::ErrParams p{pa::make_family(pa::RhoFamily::polylog, eps, 1e3), 30.0, 1e3};
    double t = 2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pa::alloc_err({t, 2.0, 1}, p));
        t = t < 900.0 ? t * 1.07 : 2.0;
    }
}
BENCHMARK(BM_AllocErrPolylog)->Arg(25)->Arg(50)->Arg(100);

static void BM_Integrate(benchmark::State& state)
{
    auto f = [](double z) { const double l = std::log(z); return 1.0 / (z * (1.0 + l * l)); };
    for (auto _ : state) {
        benchmark::DoNotOptimize(pa::integrate(f, 1.0, 1e8, {}));
    }
}
BENCHMARK(BM_Integrate);

static void BM_CheckDsic(benchmark::State& state)
{
    const auto auction = pa::make_cr_auction({0.5, 0.1, 4.0, 100.0});
    const auto grid = pa::GridSpec::around_prediction(4.0, 100.0, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pa::check_dsic(auction, grid));
    }
}
BENCHMARK(BM_CheckDsic)->Arg(50)->Arg(200);

BENCHMARK_MAIN();
