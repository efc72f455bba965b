// bench_main.cpp — timing of the main numerical kernels

#include "starnet/starnet.hpp"

#include <benchmark/benchmark.h>

using namespace starnet;

namespace {

NetworkParams star(std::size_t n, double g) {
    NetworkParams p;
    p.n = n;
    p.mass = 1.0;
    for (std::size_t i = 0; i <= n; ++i) p.hooke.push_back(1.0 + 0.1 * static_cast<double>(i % 3));
    for (std::size_t i = 0; i < n; ++i) p.couplings.push_back(g + 0.05 * static_cast<double>(i));
    p.bath_rate = 0.5;
    return p;
}

void BM_analyze_modes(benchmark::State& state) {
    const auto decomp = build_potential(star(static_cast<std::size_t>(state.range(0)), 20.0));
    for (auto _ : state) benchmark::DoNotOptimize(analyze_modes(decomp));
}
BENCHMARK(BM_analyze_modes)->Arg(3)->Arg(16)->Arg(64);

void BM_exact_diagonalize(benchmark::State& state) {
    const auto decomp = build_potential(star(static_cast<std::size_t>(state.range(0)), 20.0));
    for (auto _ : state) benchmark::DoNotOptimize(exact_diagonalize(decomp));
}
BENCHMARK(BM_exact_diagonalize)->Arg(3)->Arg(16)->Arg(64);

void BM_frequency_sweep(benchmark::State& state) {
    NetworkParams p;
    p.n = 3;
    p.hooke = {1.0, 0.2, 10.0, 1.0};
    p.couplings = {0.9, 1.0, 1.1};
    for (auto _ : state) benchmark::DoNotOptimize(frequency_sweep(p, 1.0, 100.0, 50, {0.9, 1.0, 1.1}));
}
BENCHMARK(BM_frequency_sweep);

void BM_position_trajectory(benchmark::State& state) {
    const auto p = star(3, 50.0);
    const auto modes = analyze_modes(build_potential(p));
    const auto t = build_canonical_transform(modes, p);
    const auto diss = make_dissipation(modes, p);
    const auto st = init_state(std::vector<ModePrep>(4, ModePrep::coherent({1.0, 0.0})), StateFrame::physical);
    const auto grid = linear_grid(100.0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(position_trajectory(st, t, diss, grid));
}
BENCHMARK(BM_position_trajectory)->Arg(1001)->Arg(4001);

void BM_fock_oracle(benchmark::State& state) {
    auto p = star(2, 10.0);
    p.bath_rate = 0.1;
    const auto modes = analyze_modes(build_potential(p));
    const auto t = build_canonical_transform(modes, p);
    const auto diss = make_dissipation(modes, p);
    FockOptions opts;
    opts.cutoff = static_cast<std::size_t>(state.range(0));
    const std::vector<ModePrep> preps(3, ModePrep::coherent({0.5, 0.0}));
    for (auto _ : state) benchmark::DoNotOptimize(fock_oracle_evolve(t, diss, preps, linear_grid(2.0, 21), opts));
}
BENCHMARK(BM_fock_oracle)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
