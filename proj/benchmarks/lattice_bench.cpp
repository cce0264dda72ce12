#include <benchmark/benchmark.h>

#include "nulldist/lattice.hpp"

namespace {

using namespace nulldist;

LatticeConfig square(int n) {
  LatticeConfig c;
  c.n_time = n;
  c.n_space = n;
  return c;
}

void BM_LatticeBuild(benchmark::State& state) {
  const WarpedSpacetime st(0, 2, BaseManifold::interval(4), WarpingFunction::quadratic());
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    CausalLattice lat(st, TimeFunction::canonical(), square(n));
    benchmark::DoNotOptimize(lat.node_count());
  }
}
BENCHMARK(BM_LatticeBuild)->Arg(101)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);

void BM_DijkstraField(benchmark::State& state) {
  const WarpedSpacetime st(0, 2, BaseManifold::interval(4), WarpingFunction::quadratic());
  const int n = static_cast<int>(state.range(0));
  const CausalLattice lat(st, TimeFunction::canonical(), square(n));
  const auto source = lat.snap(SpacetimePoint::on_line(0, -1)).node;
  for (auto _ : state) {
    auto field = lat.distances_from(source);
    benchmark::DoNotOptimize(field.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lat.node_count()));
}
BENCHMARK(BM_DijkstraField)->Arg(101)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);

void BM_CircleMatrix(benchmark::State& state) {
  const auto st = WarpedSpacetime::product(0, 2, BaseManifold::circle(6.283185307179586));
  const CausalLattice lat(st, TimeFunction::canonical(), square(static_cast<int>(state.range(0))));
  std::vector<SpacetimePoint> pts;
  for (int k = 0; k < 16; ++k) pts.push_back(SpacetimePoint::on_line(0.125 * (k % 8), 0.39 * k));
  for (auto _ : state) {
    auto m = lat.distance_matrix(pts);
    benchmark::DoNotOptimize(m.data());
  }
}
BENCHMARK(BM_CircleMatrix)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
