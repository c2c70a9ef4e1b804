// Serial vs OpenMP timings of the data-parallel kernels on the reference
// deployment. Arg(0) = serial reference path, Arg(1) = OpenMP path.

#include <benchmark/benchmark.h>

#include "dsnsim/engine.hpp"
#include "dsnsim/scenario.hpp"
#include "dsnsim/sinr_map.hpp"

namespace {

using namespace dsnsim;

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

const NetworkLayout& reference_layout() {
    static const NetworkLayout layout = generate_layout(reference_scenario().geometry, StreamKey{1, 0});
    return layout;
}

void BM_LinkGainMatrix(benchmark::State& state) {
    const auto& layout = reference_layout();
    const PropagationConfig config;
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_link_gain_matrix(layout, config, StreamKey{1, 0}, exec_of(state)));
    }
    state.SetItemsProcessed(state.iterations() * layout.n_cells() * layout.n_ues());
}
BENCHMARK(BM_LinkGainMatrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LinkQuality(benchmark::State& state) {
    const auto& layout = reference_layout();
    const auto cells = layout.cells();
    const auto gains = build_link_gain_matrix(layout, PropagationConfig{}, StreamKey{1, 0});
    const auto association = associate(cells, gains);
    const auto rx = received_power_mw(cells, gains);
    const auto active = active_cells(association, layout.n_cells());
    const L2sConfig l2s;
    const std::vector<RbMask> masks(cells.size(), RbMask::full(l2s.n_rb));
    const double noise = db_to_linear(noise_power_per_rb(l2s));
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_link_quality(rx, association, masks, active, noise, exec_of(state)));
    }
    state.SetItemsProcessed(state.iterations() * layout.n_ues() * l2s.n_rb);
}
BENCHMARK(BM_LinkQuality)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SinrMap(benchmark::State& state) {
    const auto& layout = reference_layout();
    const auto cells = layout.cells();
    const auto area = grid_bounding_box(layout.macro_sectors, 500.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_sinr_map(cells, PropagationConfig{}, L2sConfig{}, area, 25.0, exec_of(state)));
    }
}
BENCHMARK(BM_SinrMap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FullDrop(benchmark::State& state) {
    const Scenario scenario = reference_scenario();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_drop(scenario, 1, 0, exec_of(state)));
    }
}
BENCHMARK(BM_FullDrop)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
