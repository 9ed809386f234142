#include <benchmark/benchmark.h>

#include <might/estimator.hpp>
#include <might/iht.hpp>
#include <might/rng.hpp>
#include <might/simbench.hpp>
#include <might/thresholding.hpp>

using namespace might;

namespace {

DatasetCollection bench_data(Index p) {
    ExperimentSpec spec;
    spec.p = p;
    return simulate_replication(spec, 0).data;
}

ScaledDesign bench_problem(Index p) {
    const auto data = bench_data(p);
    return build_node_problem(data, empirical_moments(data), 0, SolverConfig{}.c0);
}

void BM_TwoStepThreshold(benchmark::State& state) {
    CounterRng rng(1);
    Matrix values(state.range(0), 10);
    for (Index i = 0; i < values.size(); ++i) values.data()[i] = rng.normal();
    for (auto _ : state) {
        Matrix work = values;
        two_step_threshold_inplace(work, 0.8, 3.0);
        benchmark::DoNotOptimize(work.data());
    }
}
BENCHMARK(BM_TwoStepThreshold)->Arg(49)->Arg(199);

void BM_GradientStep(benchmark::State& state) {
    const auto problem = bench_problem(state.range(0));
    CoefficientStack beta(problem.num_edges(), problem.num_tasks(), 0);
    for (auto _ : state) benchmark::DoNotOptimize(gradient_step(problem, beta).values.data());
}
BENCHMARK(BM_GradientStep)->Arg(50)->Arg(200);

void BM_Solve(benchmark::State& state) {
    const auto problem = bench_problem(state.range(0));
    const SolverConfig config;
    for (auto _ : state) benchmark::DoNotOptimize(solve(problem, 3.0, config).trace.iterations);
}
BENCHMARK(BM_Solve)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_Estimate(benchmark::State& state) {
    const auto data = bench_data(state.range(0));
    EstimateOptions options;
    options.workers = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(estimate(data, options).precision.matrices.data());
}
BENCHMARK(BM_Estimate)->Args({50, 1})->Args({100, 1})->Args({100, 8})->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
