#include <benchmark/benchmark.h>

#include <cmath>

#include "kfix/collision.hpp"

using namespace kfix;

namespace {

std::vector<double> maxwellian(const VelocityGrid& vg) {
  std::vector<double> f(static_cast<std::size_t>(vg.num_nodes()));
  for (int i = 0; i < vg.num_nodes(); ++i)
    f[static_cast<std::size_t>(i)] = std::exp(-norm2(vg.node(i)));
  return f;
}

void BM_QQuadratic(benchmark::State& state) {
  const int nodes = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const VelocityGrid vg = build_velocity_grid(3, 4.0, nodes);
  const SphereQuadrature sq = build_sphere_quadrature(3, order);
  const KernelSpec k = KernelSpec::hard_sphere(1.0, 1.0, 1.0, 0.0);
  const std::vector<double> f = maxwellian(vg);
  for (auto _ : state) {
    const CollisionResult r = q_quadratic(f, k, vg, sq);
    benchmark::DoNotOptimize(r.total.data());
  }
  // kernel evaluations per slice
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(vg.num_nodes()) *
                          vg.num_nodes() * static_cast<std::int64_t>(sq.nodes.size()));
}

void BM_QBilinear(benchmark::State& state) {
  const int nodes = static_cast<int>(state.range(0));
  const VelocityGrid vg = build_velocity_grid(3, 4.0, nodes);
  const SphereQuadrature sq = build_sphere_quadrature(3, 4);
  const KernelSpec k = KernelSpec::hard_sphere(1.0, 1.0, 1.0, 0.0);
  const std::vector<double> f = maxwellian(vg);
  for (auto _ : state) {
    const CollisionResult r = q_bilinear(f, f, k, vg, sq);
    benchmark::DoNotOptimize(r.total.data());
  }
}

}  // namespace

BENCHMARK(BM_QQuadratic)->Args({9, 4})->Args({9, 6})->Args({17, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QBilinear)->Arg(9)->Unit(benchmark::kMillisecond);
