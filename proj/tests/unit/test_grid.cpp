#include <doctest.h>

#include <numbers>
#include <set>

#include "kfix/field.hpp"
#include "kfix/grid.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace kfix;
using std::numbers::pi;

TEST_SUITE_BEGIN("grid");

TEST_CASE("velocity grid construction") {
  const VelocityGrid g = build_velocity_grid(3, 4.0, 5);
  CHECK(g.spacing == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g.num_nodes() == 125);

  // origin is a node
  bool has_origin = false;
  for (int i = 0; i < g.num_nodes(); ++i)
    if (norm(g.node(i)) == 0.0) has_origin = true;
  CHECK(has_origin);

  const VelocityGrid g2 = build_velocity_grid(2, 1.0, 5);
  CHECK(g2.num_nodes() == 25);
  CHECK(g2.spacing == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(build_velocity_grid(3, 4.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_velocity_grid(4, 4.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(build_velocity_grid(3, -1.0, 5), std::invalid_argument);
}

TEST_CASE("velocity grid is symmetric about the origin") {
  const VelocityGrid g = build_velocity_grid(3, 2.5, 7);
  std::set<std::array<long, 3>> nodes;
  auto quantize = [&](const Vec3& v) {
    return std::array<long, 3>{std::lround(v[0] * 1e12), std::lround(v[1] * 1e12),
                               std::lround(v[2] * 1e12)};
  };
  for (int i = 0; i < g.num_nodes(); ++i) nodes.insert(quantize(g.node(i)));
  for (int i = 0; i < g.num_nodes(); ++i)
    CHECK(nodes.count(quantize(scaled(g.node(i), -1.0))) == 1);
}

TEST_CASE("sphere quadrature: circle rule") {
  const SphereQuadrature q = build_sphere_quadrature(2, 8);
  CHECK(q.nodes.size() == 8);
  for (double w : q.weights) CHECK(w == doctest::Approx(pi / 4.0).epsilon(1e-14));
  double sum = 0.0;
  for (double w : q.weights) sum += w;
  CHECK(testutil::rel_err(sum, 2.0 * pi) < 1e-14);
}

TEST_CASE("sphere quadrature: product rule on S^2") {
  const SphereQuadrature q = build_sphere_quadrature(3, 6);
  CHECK(q.nodes.size() == 36);
  double sum = 0.0, second = 0.0, odd = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    CHECK(std::abs(norm(q.nodes[i]) - 1.0) <= 1e-12);
    sum += q.weights[i];
    second += q.weights[i] * q.nodes[i][0] * q.nodes[i][0];
    odd += q.weights[i] * q.nodes[i][0];
  }
  CHECK(std::abs(sum - 4.0 * pi) <= 1e-10);
  // int (omega . e1)^2 domega = 4 pi / 3
  CHECK(std::abs(second - 4.0 * pi / 3.0) <= 1e-8);
  CHECK(std::abs(odd) <= 1e-10);

  CHECK_THROWS_AS(build_sphere_quadrature(3, 3), std::invalid_argument);
}

TEST_CASE("post_collision examples") {
  const Vec3 u{1.0, 0.0, 0.0}, v{-1.0, 0.0, 0.0};

  SUBCASE("grazing: omega perpendicular to u - v") {
    const auto [up, vp] = post_collision(u, v, Vec3{0.0, 1.0, 0.0});
    CHECK(up == u);
    CHECK(vp == v);
  }
  SUBCASE("head-on swap") {
    const auto [up, vp] = post_collision(u, v, Vec3{1.0, 0.0, 0.0});
    CHECK(up == Vec3{-1.0, 0.0, 0.0});
    CHECK(vp == Vec3{1.0, 0.0, 0.0});
  }
  SUBCASE("45-degree deflection") {
    const double s = 1.0 / std::sqrt(2.0);
    const auto [up, vp] = post_collision(u, v, Vec3{s, s, 0.0});
    CHECK(testutil::rel_err(up[1], -1.0) < 1e-14);
    CHECK(testutil::rel_err(vp[1], 1.0) < 1e-14);
    CHECK(std::abs(up[0]) < 1e-14);
    CHECK(std::abs(vp[0]) < 1e-14);
    CHECK(std::abs((up[0] + vp[0]) - (u[0] + v[0])) < 1e-14);
    CHECK(testutil::rel_err(norm2(up) + norm2(vp), norm2(u) + norm2(v)) < 1e-14);
  }
  SUBCASE("non-unit omega rejected") {
    CHECK_THROWS_AS(post_collision(u, v, Vec3{0.5, 0.0, 0.0}), std::invalid_argument);
  }
}

TEST_CASE("post_collision conservation and involution over random triples") {
  std::mt19937_64 rng(7);
  auto rnd = [&] { return 4.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 2.0; };
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 u{rnd(), rnd(), rnd()};
    const Vec3 v{rnd(), rnd(), rnd()};
    Vec3 w{rnd(), rnd(), rnd()};
    const double nw = norm(w);
    if (nw < 1e-3) continue;
    w = scaled(w, 1.0 / nw);

    const auto [up, vp] = post_collision(u, v, w);
    for (int a = 0; a < 3; ++a)
      CHECK(std::abs((up[static_cast<std::size_t>(a)] + vp[static_cast<std::size_t>(a)]) -
                     (u[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(a)])) <= 1e-12);
    CHECK(std::abs((norm2(up) + norm2(vp)) - (norm2(u) + norm2(v))) <= 1e-12);

    const auto [u2, v2] = post_collision(up, vp, w);
    CHECK(std::abs(u2[0] - u[0]) <= 1e-12);
    CHECK(std::abs(u2[1] - u[1]) <= 1e-12);
    CHECK(std::abs(u2[2] - u[2]) <= 1e-12);
    CHECK(std::abs(v2[0] - v[0]) <= 1e-12);
  }
}

TEST_CASE("l1_norm") {
  // 3 nodes per axis on [-1,1], dv = 1; assembled directly since the
  // builder's own floor is 5 nodes.
  const VelocityGrid vg{2, 1.0, 3, 1.0};
  const SpatialGrid sg = build_spatial_grid(2, 1.0, 1);

  SUBCASE("zero field") {
    const DistributionField f({0.0, 0.5, 1.0}, sg, vg);
    CHECK(l1_norm(f) == 0.0);
  }
  SUBCASE("constant field: dt-weighted phase-space volume") {
    DistributionField f({0.0, 0.5, 1.0}, sg, vg);
    for (double& v : f.values) v = 1.0;
    // 3 time nodes x weight 0.5 x spatial weight 1 x 9 nodes x dv^2 = 1
    CHECK(testutil::rel_err(l1_norm(f), 3.0 * 0.5 * 9.0 * 1.0) < 1e-14);
  }
  SUBCASE("matches the naive triple sum") {
    std::mt19937_64 rng(11);
    const DistributionField f =
        testutil::random_field({0.0, 0.25, 0.5}, sg, vg, rng, -1.0, 1.0);
    CHECK(testutil::rel_err(l1_norm(f), oracle::l1_field(f)) < 1e-12);
  }
  SUBCASE("homogeneity and triangle inequality") {
    std::mt19937_64 rng(13);
    const DistributionField f = testutil::random_field({0.0, 1.0}, sg, vg, rng, -1.0, 1.0);
    const DistributionField g = testutil::random_field({0.0, 1.0}, sg, vg, rng, -1.0, 1.0);
    CHECK(testutil::rel_err(l1_norm(field_scaled(f, -2.5)), 2.5 * l1_norm(f)) < 1e-13);
    CHECK(l1_norm(field_sum(f, g)) <= l1_norm(f) + l1_norm(g) + 1e-13);
  }
}

TEST_CASE("compute_moments") {
  SUBCASE("zero slice") {
    const VelocityGrid vg = build_velocity_grid(3, 2.0, 5);
    const std::vector<double> f(static_cast<std::size_t>(vg.num_nodes()), 0.0);
    const Moments m = compute_moments(f, vg);
    CHECK(m.mass == 0.0);
    CHECK(norm(m.momentum) == 0.0);
    CHECK(m.energy == 0.0);
  }
  SUBCASE("even distribution has zero momentum") {
    const VelocityGrid vg = build_velocity_grid(3, 2.0, 7);
    std::vector<double> f(static_cast<std::size_t>(vg.num_nodes()));
    for (int i = 0; i < vg.num_nodes(); ++i)
      f[static_cast<std::size_t>(i)] = std::exp(-norm2(vg.node(i)));
    const Moments m = compute_moments(f, vg);
    CHECK(norm(m.momentum) <= 1e-12);
  }
  SUBCASE("Maxwellian mass approaches pi^(3/2)") {
    const VelocityGrid vg = build_velocity_grid(3, 4.0, 33);
    std::vector<double> f(static_cast<std::size_t>(vg.num_nodes()));
    for (int i = 0; i < vg.num_nodes(); ++i)
      f[static_cast<std::size_t>(i)] = std::exp(-norm2(vg.node(i)));
    const Moments m = compute_moments(f, vg);
    CHECK(testutil::rel_err(m.mass, std::pow(pi, 1.5)) < 1e-6);
  }
}

TEST_CASE("velocity interpolation convention") {
  const VelocityGrid vg = build_velocity_grid(3, 2.0, 5);
  std::mt19937_64 rng(3);
  const std::vector<double> f =
      testutil::random_slice(static_cast<std::size_t>(vg.num_nodes()), rng);

  SUBCASE("exact at nodes") {
    for (int i = 0; i < vg.num_nodes(); ++i)
      CHECK(interp_velocity(f, vg, vg.node(i)) == doctest::Approx(f[static_cast<std::size_t>(i)]).epsilon(1e-14));
  }
  SUBCASE("zero beyond the ghost ring") {
    CHECK(interp_velocity(f, vg, Vec3{4.0, 0.0, 0.0}) == 0.0);
    CHECK(interp_velocity(f, vg, Vec3{0.0, -3.5, 0.0}) == 0.0);
  }
  SUBCASE("matches the independent gather") {
    auto rnd = [&] { return 6.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 3.0; };
    for (int trial = 0; trial < 300; ++trial) {
      const Vec3 p{rnd(), rnd(), rnd()};
      CHECK(std::abs(interp_velocity(f, vg, p) - oracle::interp_velocity(f, vg, p)) < 1e-14);
    }
  }
}

TEST_SUITE_END();
