#include <benchmark/benchmark.h>

#include "oscillax/explicit.hpp"
#include "oscillax/factor_table.hpp"
#include "oscillax/oscillation.hpp"
#include "oscillax/run.hpp"

#include <omp.h>

#include <cmath>
#include <string>

using namespace oscillax;

namespace {

constexpr std::uint64_t kSieveX = 20'000'000;

const ZeroSet &zeros()
{
    static const ZeroSet z = load_zeros(std::string(OSCILLAX_DATA_DIR) + "/zeros5000.txt");
    return z;
}

const FactorTable &table()
{
    static const FactorTable t = build_base_table(4500, TableMode::ParityNMinusOmega);
    return t;
}

RunPlan sieve_plan(int workers)
{
    RunPlan p;
    p.last = kSieveX;
    p.block_size = 1 << 21;
    p.workers = workers;
    p.sampling.log_step = 1e-3;
    for (double a : {0.0, 0.5, 1.0}) {
        const SumSpec s = SumSpec::sun_s(a);
        p.specs.push_back({s, NormalizationRule::scaling_only(s), {}});
    }
    return p;
}

void BM_SieveSerial(benchmark::State &state)
{
    const SieveContext ctx(table(), kSieveX);
    const RunPlan p = sieve_plan(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_range_serial(ctx, p));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kSieveX));
}

void BM_SieveParallel(benchmark::State &state)
{
    const SieveContext ctx(table(), kSieveX);
    const RunPlan p = sieve_plan(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_range(ctx, p));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kSieveX));
}

void BM_ResiduesSerial(benchmark::State &state)
{
    zeros();
    for (auto _ : state) {
        benchmark::DoNotOptimize(ResidueTable::build_serial(zeros(), 1000.0, BoundFamily::S));
    }
}

void BM_ResiduesParallel(benchmark::State &state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(ResidueTable::build(zeros(), 1000.0, BoundFamily::S, static_cast<int>(state.range(0))));
    }
}

const ExplicitEstimator &estimator()
{
    static const ResidueTable t = ResidueTable::build(zeros(), 3000.0, BoundFamily::S, omp_get_max_threads());
    static const ExplicitEstimator e(t, 0.0, 3000.0);
    return e;
}

ExplicitConfig grid(int workers)
{
    ExplicitConfig c;
    c.u_lo = 30.0;
    c.u_hi = 30.2;
    c.du = 1e-3;
    c.workers = workers;
    return c;
}

void BM_EstimateSerial(benchmark::State &state)
{
    const ExplicitConfig c = grid(1);
    const ExplicitEstimator &e = estimator();
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_serial(c, e));
    }
}

void BM_EstimateParallel(benchmark::State &state)
{
    const ExplicitConfig c = grid(static_cast<int>(state.range(0)));
    const ExplicitEstimator &e = estimator();
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate(c, e));
    }
}

void thread_args(benchmark::internal::Benchmark *b)
{
    const int max = std::max(1, omp_get_max_threads());
    for (int t = 1; t < max; t *= 2) {
        b->Arg(t);
    }
    b->Arg(max);
}

} // namespace

BENCHMARK(BM_SieveSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SieveParallel)->Apply(thread_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ResiduesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResiduesParallel)->Apply(thread_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EstimateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateParallel)->Apply(thread_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
