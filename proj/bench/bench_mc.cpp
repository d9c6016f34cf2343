// OpenMP Monte Carlo kernels against the serial reference estimators.
// Set OMP_NUM_THREADS to compare thread counts.

#include <benchmark/benchmark.h>

#include "affine/mc.hpp"
#include "affine/mc_reference.hpp"

namespace {

using namespace affine;

const Vasicek kModel{0.4, 0.02, 0.03};
const MarketState kOrigin{0.0, 0.0};
const OptionSpec kCall{OptionKind::Call, 0.8, 3.0, 5.0};

MCConfig config(benchmark::State& state, Scheme scheme) {
    MCConfig c;
    c.paths = static_cast<std::size_t>(state.range(0));
    c.scheme = scheme;
    c.steps = 100;
    return c;
}

template <class Fn>
void run(benchmark::State& state, Fn&& fn) {
    for (auto _ : state) benchmark::DoNotOptimize(fn().estimate);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BondParallel(benchmark::State& s) {
    const auto c = config(s, Scheme::Exact);
    run(s, [&] { return mc_bond_price(kModel, kOrigin, 5.0, c); });
}

void BM_BondReference(benchmark::State& s) {
    const auto c = config(s, Scheme::Exact);
    run(s, [&] { return reference::mc_bond_price(kModel, kOrigin, 5.0, c); });
}

void BM_CallParallel(benchmark::State& s) {
    const auto c = config(s, Scheme::Exact);
    run(s, [&] { return mc_option_price(kModel, kOrigin, kCall, c); });
}

void BM_CallReference(benchmark::State& s) {
    const auto c = config(s, Scheme::Exact);
    run(s, [&] { return reference::mc_option_price(kModel, kOrigin, kCall, c); });
}

void BM_EulerCallParallel(benchmark::State& s) {
    const auto c = config(s, Scheme::Euler);
    run(s, [&] { return mc_option_price(kModel, kOrigin, kCall, c); });
}

void BM_EulerCallReference(benchmark::State& s) {
    const auto c = config(s, Scheme::Euler);
    run(s, [&] { return reference::mc_option_price(kModel, kOrigin, kCall, c); });
}

}  // namespace

BENCHMARK(BM_BondParallel)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BondReference)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CallParallel)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CallReference)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EulerCallParallel)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EulerCallReference)->Arg(100'000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
