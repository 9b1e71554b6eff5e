#include <benchmark/benchmark.h>

#include <cmath>

#include "abt/body_approximation.hpp"
#include "abt/currents.hpp"
#include "abt/direction_measure.hpp"
#include "abt/hypermetric.hpp"
#include "abt/polygon_decomposition.hpp"
#include "abt/solver.hpp"

namespace {

abt::SymmetricPolygon regular_polygon(int half) {
  std::vector<abt::Vec2> verts;
  for (int i = 0; i < half; ++i) verts.push_back(abt::unit_dir(0.131 + M_PI * double(i) / half));
  return abt::SymmetricPolygon::from_half(std::move(verts));
}

void PolygonDecompose(benchmark::State& state) {
  auto poly = regular_polygon(int(state.range(0)));
  for (auto _ : state) {
    auto dec = abt::polygon_decompose(poly);
    benchmark::DoNotOptimize(dec.weights.data());
  }
}
BENCHMARK(PolygonDecompose)->Arg(16)->Arg(64)->Arg(256);

void DiscMeasure(benchmark::State& state) {
  auto gauge = abt::Anisotropy::constant(1.0, 2);
  for (auto _ : state) {
    auto mu = abt::representing_measure(gauge, int(state.range(0)));
    benchmark::DoNotOptimize(mu.total_mass());
  }
}
BENCHMARK(DiscMeasure)->Arg(6)->Arg(10);

void CanonicalizeOverlaps(benchmark::State& state) {
  abt::Rng rng(1);
  abt::PolyhedralOneCurrent p;
  p.dim = 2;
  for (int i = 0; i < state.range(0); ++i) {
    double t0 = rng.uniform(0, 4), t1 = rng.uniform(0, 4);
    if (t0 == t1) continue;
    p.add_edge(abt::Vec2{t0, 0.0}, abt::Vec2{t1, 0.0}, double(rng.uniform_int(1, 3)));
  }
  for (auto _ : state) {
    auto c = abt::canonicalize(p);
    benchmark::DoNotOptimize(c.edges.data());
  }
}
BENCHMARK(CanonicalizeOverlaps)->Arg(32)->Arg(128);

void HypermetricPlanar(benchmark::State& state) {
  auto diamond = abt::Anisotropy::polygonal(
      abt::SymmetricPolygon::from_vertices({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}));
  auto grid = abt::lattice_grid(2, 1);
  abt::HypermetricBudget budget;
  budget.max_points = int(state.range(0));
  for (auto _ : state) {
    auto cert = abt::hypermetric_search(diamond, grid, budget);
    benchmark::DoNotOptimize(cert.has_value());
  }
}
BENCHMARK(HypermetricPlanar)->Arg(5)->Arg(7);

void SolveSymmetricY(benchmark::State& state) {
  abt::TransportProblem problem;
  problem.dim = 2;
  problem.sources = {{{-1, 0}, 1.0}, {{1, 0}, 1.0}};
  problem.targets = {{{0, 2}, 2.0}};
  for (auto _ : state) {
    auto result = abt::solve(problem);
    benchmark::DoNotOptimize(result.best.cost);
  }
}
BENCHMARK(SolveSymmetricY);

}  // namespace

BENCHMARK_MAIN();
