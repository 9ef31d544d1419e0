#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "kfix/transport.hpp"

using namespace kfix;

namespace {

void BM_Sharp2D(benchmark::State& state) {
  const int nx = static_cast<int>(state.range(0));
  const VelocityGrid vg = build_velocity_grid(2, 4.0, 9);
  const SpatialGrid sg = build_spatial_grid(2, 1.0, nx);
  DistributionField f({0.0, 0.37}, sg, vg);
  for (std::size_t ix = 0; ix < f.num_space(); ++ix)
    for (std::size_t iv = 0; iv < f.num_vel(); ++iv) {
      const Vec3 x = sg.node(static_cast<int>(ix));
      f.at(1, ix, iv) = (1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * x[0])) *
                        std::exp(-norm2(vg.node(static_cast<int>(iv))));
    }
  for (auto _ : state) {
    const std::vector<double> h = sharp(f, 1);
    benchmark::DoNotOptimize(h.data());
  }
}

}  // namespace

BENCHMARK(BM_Sharp2D)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
