// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "lubchain/discrete.hpp"
#include "lubchain/experiments.hpp"
#include "lubchain/kernels.hpp"
#include "lubchain/random_cases.hpp"
#include "lubchain/reference.hpp"
#include "lubchain/tridiagonal.hpp"

using namespace lubchain;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed)
{
    Xoshiro256 rng(seed);
    std::vector<double> v(n);
    for (double& x : v)
        x = rng.uniform(-1.0, 1.0);
    return v;
}

void BM_scan_parallel(benchmark::State& state)
{
    auto in = random_vector(state.range(0), 1);
    std::vector<double> out(in.size());
    for (auto _ : state)
    {
        kernels::inclusive_scan(in, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_scan_serial(benchmark::State& state)
{
    auto in = random_vector(state.range(0), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::inclusive_scan_serial(in));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct Instance
{
    ParticleConfiguration config;
    std::vector<double> loads;
};

Instance instance(std::size_t n)
{
    Xoshiro256 rng(n);
    auto cfg = random_cases::strict_configuration(rng, n);
    auto loads = random_cases::loads(rng, n - 1);
    return {std::move(cfg), std::move(loads)};
}

void BM_explicit_parallel(benchmark::State& state)
{
    auto inst = instance(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(discrete::solve_explicit(inst.config, inst.loads));
}

void BM_explicit_serial(benchmark::State& state)
{
    auto inst = instance(state.range(0));
    auto gaps = inst.config.gaps();
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::explicit_solution_serial(gaps, inst.loads));
}

void BM_thomas(benchmark::State& state)
{
    auto inst = instance(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(discrete::solve_strict(inst.config, inst.loads));
}

void BM_dense(benchmark::State& state)
{
    auto inst = instance(state.range(0));
    auto a = reference::to_dense(discrete::build_matrix(inst.config));
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::dense_solve(a, inst.loads));
}

void BM_sample_forces_parallel(benchmark::State& state)
{
    auto inst = instance(state.range(0));
    auto f = ForceProfile::sine(1.0, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_forces(inst.config, f));
}

void BM_sample_forces_serial(benchmark::State& state)
{
    auto inst = instance(state.range(0));
    auto f = ForceProfile::sine(1.0, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::sample_forces_simpson(inst.config, f, 8));
}

void BM_sweep(benchmark::State& state)
{
    experiments::SweepPlan plan{DensityProfile::bump(0.5, 0.5, 0.8, 0.2), ForceProfile::constant(1.0),
                                experiments::epsilon_range(1.0 / 16, 1.0 / 512, 2.0)};
    plan.grid_size = 1024;
    int const jobs = int(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(experiments::run_sweep(plan, jobs));
    state.counters["threads"] = jobs;
}

}  // namespace

BENCHMARK(BM_scan_parallel)->Range(1 << 12, 1 << 22);
BENCHMARK(BM_scan_serial)->Range(1 << 12, 1 << 22);
BENCHMARK(BM_explicit_parallel)->Range(1 << 10, 1 << 20);
BENCHMARK(BM_explicit_serial)->Range(1 << 10, 1 << 20);
BENCHMARK(BM_thomas)->Range(1 << 10, 1 << 20);
BENCHMARK(BM_dense)->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(BM_sample_forces_parallel)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_sample_forces_serial)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_sweep)->Arg(1)->Arg(omp_get_max_threads())->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
