#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "apnet/coupling.hpp"
#include "apnet/oracle.hpp"
#include "apnet/riemann.hpp"
#include "apnet/scenarios.hpp"
#include "apnet/scheme.hpp"
#include "apnet/simulator.hpp"

using namespace apnet;

namespace {

std::vector<RoadState> random_states(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0), w(1.0, 3.0), c(0.5, 1.5);
  std::vector<RoadState> out;
  for (std::size_t k = 0; k < n; ++k) {
    RoadState u{0.0, w(rng), c(rng)};
    u.rho = unit(rng) * u.w / u.c;
    out.push_back(u);
  }
  return out;
}

void BM_RiemannSolve(benchmark::State& state) {
  const auto states = random_states(1024, 1);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_riemann(states[k % 1024], states[(k + 1) % 1024], 2.0));
    ++k;
  }
}
BENCHMARK(BM_RiemannSolve);

void BM_GodunovFlux(benchmark::State& state) {
  const auto states = random_states(1024, 2);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(godunov_flux(states[k % 1024], states[(k + 1) % 1024], 1.0));
    ++k;
  }
}
BENCHMARK(BM_GodunovFlux);

GridRoad smooth_road(std::size_t cells) {
  GridRoad road;
  road.dx = 1.0 / static_cast<double>(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    const double x = (static_cast<double>(j) + 0.5) * road.dx;
    road.cells.push_back({0.3 + 0.2 * x, 2.0 - 0.3 * x, 1.0});
  }
  return road;
}

void BM_GodunovStep(benchmark::State& state) {
  GridRoad road = smooth_road(static_cast<std::size_t>(state.range(0)));
  const double dt = 0.1 * road.dx;
  for (auto _ : state) {
    godunov_step(road, dt, RoadBoundary::closed(road));
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GodunovStep)->Arg(100)->Arg(1000)->Arg(10000);

void BM_TeStep(benchmark::State& state) {
  GridRoad road = smooth_road(static_cast<std::size_t>(state.range(0)));
  const double dt = 0.1 * road.dx;
  std::uint64_t s = 0;
  for (auto _ : state) {
    te_step(road, s++, dt, RoadBoundary::closed(road));
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TeStep)->Arg(100)->Arg(1000)->Arg(10000);

void BM_ResolveJunction(benchmark::State& state) {
  Junction j;
  j.incoming = {1, 2, 3};
  j.outgoing = {4, 5};
  j.priorities = {0.2, 0.3, 0.5};
  j.distribution = {{0.5, 0.4, 0.7}, {0.5, 0.6, 0.3}};
  const std::vector<RoadState> in{{0.4, 2.0, 1.0}, {0.9, 1.5, 1.2}, {0.2, 2.5, 0.8}};
  const std::vector<RoadState> out{{0.3, 2.0, 1.0}, {1.1, 2.2, 1.0}};
  const std::vector<OutgoingReference> ref{{2.1, 1.02}, {1.9, 1.05}};
  for (auto _ : state) benchmark::DoNotOptimize(resolve_junction(j, in, out, ref, 1.0));
}
BENCHMARK(BM_ResolveJunction);

void BM_OracleTable(benchmark::State& state) {
  const MixtureSpec mix{{0.5, 0.5}, {4.5, 3.5}, 1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(build_table(mix, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_OracleTable)->Arg(1001)->Arg(10001);

void BM_SequentialRun(benchmark::State& state) {
  const Network net = scenario_sequential({});
  for (auto _ : state) benchmark::DoNotOptimize(run(net));
}
BENCHMARK(BM_SequentialRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
