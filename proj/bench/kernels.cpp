// Parallel kernels against their serial references on the room map.
#include <benchmark/benchmark.h>

#include "rcnav/app/scenarios.hpp"
#include "rcnav/reference.hpp"

using namespace rcnav;

namespace {

const Scenario& room() {
    static const Scenario s = room_scenario();
    return s;
}

const DistanceField& field() {
    static const DistanceField f = build_distance_field(room().grid);
    return f;
}

ParticleSet cloud(int n) {
    RandomStream rng(3);
    return initialize(AroundInit{room().start, 0.5, 0.2}, room().grid, n, rng);
}

LaserScan scan_at_start() {
    RandomStream rng(5);
    return simulate_scan(room().grid, room().start, ScanParams{}, rng);
}

template <bool Parallel>
void BM_Scan(benchmark::State& state) {
    RandomStream rng(1);
    for (auto _ : state) {
        auto s = Parallel ? simulate_scan(room().grid, room().start, ScanParams{}, rng)
                          : reference::simulate_scan(room().grid, room().start, ScanParams{}, rng);
        benchmark::DoNotOptimize(s.ranges.data());
    }
}

template <bool Parallel>
void BM_DistanceField(benchmark::State& state) {
    for (auto _ : state) {
        auto f = Parallel ? build_distance_field(room().grid) : reference::build_distance_field(room().grid);
        benchmark::DoNotOptimize(f.values().data());
    }
}

template <bool Parallel>
void BM_Motion(benchmark::State& state) {
    const auto ps = cloud(static_cast<int>(state.range(0)));
    RandomStream rng(7);
    for (auto _ : state) {
        auto out = Parallel ? motion_update(ps, {1.0, 0.2}, 0.05, VehicleParams{}, {0.1, 0.04}, rng)
                            : reference::motion_update(ps, {1.0, 0.2}, 0.05, VehicleParams{}, {0.1, 0.04}, rng);
        benchmark::DoNotOptimize(out.particles.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Sensor(benchmark::State& state) {
    const auto ps = cloud(static_cast<int>(state.range(0)));
    const auto scan = scan_at_start();
    for (auto _ : state) {
        auto out = Parallel ? sensor_update(ps, scan, field(), SensorModelParams{})
                            : reference::sensor_update(ps, scan, field(), SensorModelParams{});
        benchmark::DoNotOptimize(out.particles.particles.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Plan(benchmark::State& state) {
    const VehicleParams vp;
    const auto lib = build_library(vp, {});
    const Pose2D goal{room().goal.x, room().goal.y, 0.0};
    for (auto _ : state) {
        auto r = Parallel ? plan(room().start, goal, room().grid, lib, CostWeights{}, vp)
                          : reference::plan(room().start, goal, room().grid, lib, CostWeights{}, vp);
        benchmark::DoNotOptimize(r.best);
    }
}

}  // namespace

BENCHMARK(BM_Scan<false>)->Name("scan/serial")->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Scan<true>)->Name("scan/parallel")->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DistanceField<false>)->Name("distance_field/serial")->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DistanceField<true>)->Name("distance_field/parallel")->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Motion<false>)->Name("motion_update/serial")->Arg(2000)->Arg(20000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Motion<true>)->Name("motion_update/parallel")->Arg(2000)->Arg(20000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Sensor<false>)->Name("sensor_update/serial")->Arg(2000)->Arg(20000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Sensor<true>)->Name("sensor_update/parallel")->Arg(2000)->Arg(20000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Plan<false>)->Name("plan/serial")->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Plan<true>)->Name("plan/parallel")->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
