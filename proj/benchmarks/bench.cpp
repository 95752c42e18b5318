#include <benchmark/benchmark.h>

#include "halfway/analytic.hpp"
#include "halfway/quadrature.hpp"
#include "halfway/samplers.hpp"
#include "halfway/stats.hpp"

namespace {

const halfway::HalfwayParams kParams(1.0, 0.5);

void BM_Density(benchmark::State& state) {
    double y = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(halfway::halfway_density(kParams, y));
        y = y < 100.0 ? y * 1.01 : 0.01;
    }
}
BENCHMARK(BM_Density);

void BM_Cdf(benchmark::State& state) {
    const double y = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(halfway::halfway_cdf(kParams, y));
}
BENCHMARK(BM_Cdf)->Arg(1)->Arg(50)->Arg(1000);

void BM_Quantile(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(halfway::halfway_quantile(kParams, 0.9));
}
BENCHMARK(BM_Quantile);

void BM_OracleKilled(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(halfway::halfway_density_oracle_killed(kParams, 2.0));
}
BENCHMARK(BM_OracleKilled);

void BM_OracleExcursion(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(halfway::halfway_density_oracle_excursion(kParams, 2.0));
}
BENCHMARK(BM_OracleExcursion);

void BM_ExactSampler(benchmark::State& state) {
    halfway::RngStream stream(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(halfway::sample_halfway_exact(stream, kParams));
}
BENCHMARK(BM_ExactSampler);

void BM_Normal(benchmark::State& state) {
    halfway::RngStream stream(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(stream.normal());
}
BENCHMARK(BM_Normal);

void BM_PathSampler(benchmark::State& state) {
    halfway::PathStreams streams(1, 0);
    halfway::PathConfig config;
    config.dt = 1e-2;
    config.t_max = 1e4;
    std::uint64_t steps = 0;
    for (auto _ : state) {
        const auto outcome = halfway::simulate_path_halfway(streams, kParams, config);
        steps += outcome.steps;
        benchmark::DoNotOptimize(outcome.value_at_u_tau);
    }
    state.counters["steps/s"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_PathSampler);

void BM_KsStatistic(benchmark::State& state) {
    halfway::RngStream stream(2, 0);
    std::vector<double> draws(static_cast<std::size_t>(state.range(0)));
    for (double& d : draws) d = halfway::sample_halfway_exact(stream, kParams);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            halfway::ks_statistic(draws, [](double y) { return halfway::halfway_cdf(kParams, y); }).d_n);
    }
}
BENCHMARK(BM_KsStatistic)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
