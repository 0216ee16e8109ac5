#include <benchmark/benchmark.h>

#include <cmath>

#include "rotset/flow_sim.hpp"
#include "rotset/orbit_solver.hpp"
#include "rotset/square_rotation.hpp"

using namespace rotset;

static void BM_TorusGraphBuild(benchmark::State& state) {
  const auto cfg = BilliardConfig::torus(static_cast<int>(state.range(0)), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(TorusGraph::build(cfg).edge_count());
}
BENCHMARK(BM_TorusGraphBuild)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_LoopEnumeration(benchmark::State& state) {
  const auto g = TorusGraph::build(BilliardConfig::torus(2, 0.2));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_loops(g, static_cast<int>(state.range(0)), 1u << 20).size());
}
BENCHMARK(BM_LoopEnumeration)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_OrbitSolve(benchmark::State& state) {
  const auto cfg = BilliardConfig::torus(2, 0.2);
  const auto g = TorusGraph::build(cfg);
  const auto loop = g.loop_from_steps({LatticeIndex{2, 1}, LatticeIndex{-1, 0}, LatticeIndex{1, 1}, LatticeIndex{0, -1}});
  for (auto _ : state) benchmark::DoNotOptimize(solve_periodic_orbit(loop, cfg).length);
}
BENCHMARK(BM_OrbitSolve)->Unit(benchmark::kMicrosecond);

static void BM_SimulateTorus(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto cfg = BilliardConfig::torus(m, 0.2);
  Vec x = Vec::zero(m);
  Vec v = Vec::zero(m);
  for (int a = 0; a < m; ++a) {
    x[a] = 0.41 - 0.29 * a;
    v[a] = std::sqrt(2.0 + 3.0 * a) - 0.3 * a * a;
  }
  const auto s = make_state(cfg, x, normalized(v));
  SimulateOptions opts;
  opts.record_events = false;
  long hits = 0;
  for (auto _ : state) hits += simulate(cfg, s, 1000.0, opts).obstacle_hits;
  state.counters["reflections/s"] = benchmark::Counter(static_cast<double>(hits), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulateTorus)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_SimulateSquare(benchmark::State& state) {
  const auto cfg = BilliardConfig::square(0.2);
  const auto s = make_state(cfg, Vec{0.4, 0.1}, normalized(Vec{0.3, 1.0}));
  for (auto _ : state) benchmark::DoNotOptimize(simulate(cfg, s, 1000.0).events.size());
}
BENCHMARK(BM_SimulateSquare)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
