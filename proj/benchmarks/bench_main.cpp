#include <benchmark/benchmark.h>

#include <numbers>

#include "ltvobs/counterexample.hpp"
#include "ltvobs/lifted.hpp"
#include "ltvobs/observer.hpp"
#include "ltvobs/pe.hpp"

namespace {

ltvobs::Scenario reference_scenario() {
    ltvobs::Scenario sc;
    sc.beacons = ltvobs::BeaconConfig::make(
        {ltvobs::Vector::Zero(2), (ltvobs::Vector(2) << 1, 0).finished(),
         (ltvobs::Vector(2) << 0, 1).finished()});
    sc.trajectory = ltvobs::Trajectory::circular(2, 1.0, 1.0);
    sc.x0 = (ltvobs::Vector(2) << 1, 1).finished();
    sc.bias = (ltvobs::Vector(2) << 0.1, -0.05).finished();
    sc.horizon = 5.0;
    sc.dt = 1e-3;
    sc.delta = 2.0 * std::numbers::pi;
    return sc;
}

void TransitionMatrixCounterexample(benchmark::State& state) {
    const ltvobs::LtvSystem sys = ltvobs::build_counterexample();
    for (auto _ : state) {
        auto phi = ltvobs::transition_matrix(sys, 0.0, 2.0 * std::numbers::pi);
        benchmark::DoNotOptimize(phi.phi);
    }
}
BENCHMARK(TransitionMatrixCounterexample);

void GramianCounterexample(benchmark::State& state) {
    const ltvobs::LtvSystem sys = ltvobs::build_counterexample();
    const int nodes = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto rep = ltvobs::gramian(sys, 0.0, 2.0 * std::numbers::pi, nodes);
        benchmark::DoNotOptimize(rep.W);
    }
}
BENCHMARK(GramianCounterexample)->Arg(101)->Arg(201)->Arg(401);

void ExtendedGramianLifted(benchmark::State& state) {
    const auto sc = reference_scenario();
    const ltvobs::LtvSystem sys = ltvobs::build_lifted_system(sc);
    const ltvobs::MatrixFn m = ltvobs::build_M(sc);
    for (auto _ : state) {
        auto rep = ltvobs::extended_gramian(sys, m, 0.0, sc.delta, 201);
        benchmark::DoNotOptimize(rep.W);
    }
}
BENCHMARK(ExtendedGramianLifted);

void PeCheckScan(benchmark::State& state) {
    const auto sc = reference_scenario();
    std::vector<double> grid;
    for (int i = 0; i < 10; ++i) grid.push_back(0.3 * i);
    for (auto _ : state) {
        auto rep = ltvobs::pe_check(sc, grid, 201);
        benchmark::DoNotOptimize(rep.mu);
    }
}
BENCHMARK(PeCheckScan);

void ObserverRun(benchmark::State& state) {
    const auto sc = reference_scenario();
    const auto cfg = ltvobs::ObserverConfig::defaults(sc);
    for (auto _ : state) {
        auto trace = ltvobs::run_observer(sc, cfg, 0);
        benchmark::DoNotOptimize(trace.points.back().err_norm);
    }
}
BENCHMARK(ObserverRun);

}  // namespace

BENCHMARK_MAIN();
