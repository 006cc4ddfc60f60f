#include <benchmark/benchmark.h>

#include "gaspipe/adiabatic_ua.hpp"
#include "gaspipe/profile.hpp"
#include "gaspipe/reference_solver.hpp"

using namespace gaspipe;

namespace {

const PipeModel kPipe = PipeModel::dimensionless(8.57);

void BM_ProfileOde(benchmark::State& state) {
    const auto x = uniform_grid(1.0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(g_profile_ode(0.1, 0.3, x));
}
BENCHMARK(BM_ProfileOde)->Arg(201)->Arg(801);

void BM_Sensitivities(benchmark::State& state) {
    const auto x = uniform_grid(1.0, static_cast<std::size_t>(state.range(0)));
    const auto prof = g_profile_ode(0.1, 0.3, x);
    for (auto _ : state) benchmark::DoNotOptimize(g_sensitivities(prof));
}
BENCHMARK(BM_Sensitivities)->Arg(201)->Arg(801);

void BM_UaSolution(benchmark::State& state) {
    const auto x = uniform_grid(1.0, static_cast<std::size_t>(state.range(0)));
    const auto s = modulated_schedule(0.05, 2.0, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(ua_solution(kPipe, s, 1.3, x, BcKind::PP));
}
BENCHMARK(BM_UaSolution)->Arg(201)->Arg(801);

void BM_ReferenceStep(benchmark::State& state) {
    const auto x = uniform_grid(1.0, static_cast<std::size_t>(state.range(0)));
    const auto s = modulated_schedule(0.05, 2.0, 0.3);
    ReferenceSolver solver(kPipe, x, ua_boundary(kPipe, s, BcKind::PP));
    const auto start = solver.initial_state(ua_base(kPipe, s, 0.0, x));
    for (auto _ : state) benchmark::DoNotOptimize(solver.advance(start, 1e-3));
}
BENCHMARK(BM_ReferenceStep)->Arg(201)->Arg(801);

}  // namespace
BENCHMARK_MAIN();
