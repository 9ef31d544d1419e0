#include "kfix/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kfix {

namespace {

int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

int VelocityGrid::num_nodes() const { return ipow(nodes_per_axis, dim); }

Vec3 VelocityGrid::node(int flat) const {
  Vec3 v{0.0, 0.0, 0.0};
  // Row-major decode, first axis slowest.
  for (int a = dim - 1; a >= 0; --a) {
    v[static_cast<std::size_t>(a)] = coord(flat % nodes_per_axis);
    flat /= nodes_per_axis;
  }
  return v;
}

double VelocityGrid::cell_volume() const {
  double w = 1.0;
  for (int a = 0; a < dim; ++a) w *= spacing;
  return w;
}

VelocityGrid build_velocity_grid(int dim, double extent, int nodes_per_axis) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("velocity grid: dim must be 2 or 3, got " + std::to_string(dim));
  if (!(extent > 0.0))
    throw std::invalid_argument("velocity grid: extent must be positive");
  if (nodes_per_axis < 4)
    throw std::invalid_argument("velocity grid: nodes_per_axis must be >= 4");
  if (nodes_per_axis % 2 == 0)
    throw std::invalid_argument(
        "velocity grid: nodes_per_axis must be odd so the origin is a node, got " +
        std::to_string(nodes_per_axis));
  VelocityGrid g;
  g.dim = dim;
  g.extent = extent;
  g.nodes_per_axis = nodes_per_axis;
  g.spacing = 2.0 * extent / static_cast<double>(nodes_per_axis - 1);
  return g;
}

int SpatialGrid::num_nodes() const { return ipow(nodes_per_axis, dim); }

Vec3 SpatialGrid::node(int flat) const {
  Vec3 x{0.0, 0.0, 0.0};
  for (int a = dim - 1; a >= 0; --a) {
    x[static_cast<std::size_t>(a)] = spacing() * static_cast<double>(flat % nodes_per_axis);
    flat /= nodes_per_axis;
  }
  return x;
}

double SpatialGrid::cell_volume() const {
  if (homogeneous()) return 1.0;
  double w = 1.0;
  for (int a = 0; a < dim; ++a) w *= spacing();
  return w;
}

SpatialGrid build_spatial_grid(int dim, double period, int nodes_per_axis) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("spatial grid: dim must be 2 or 3");
  if (!(period > 0.0))
    throw std::invalid_argument("spatial grid: period must be positive");
  if (nodes_per_axis < 1)
    throw std::invalid_argument("spatial grid: nodes_per_axis must be >= 1");
  SpatialGrid g;
  g.dim = dim;
  g.period = period;
  g.nodes_per_axis = nodes_per_axis;
  return g;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  const double pi = std::numbers::pi;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const std::size_t lo = static_cast<std::size_t>(i);
    const std::size_t hi = static_cast<std::size_t>(n - 1 - i);
    nodes[lo] = -x;
    nodes[hi] = x;
    weights[lo] = weights[hi] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

SphereQuadrature build_sphere_quadrature(int dim, int order) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("sphere quadrature: dim must be 2 or 3");
  if (order < 4)
    throw std::invalid_argument("sphere quadrature: order must be >= 4, got " +
                                std::to_string(order));
  const double pi = std::numbers::pi;
  SphereQuadrature q;
  q.dim = dim;
  if (dim == 2) {
    q.nodes.reserve(static_cast<std::size_t>(order));
    q.weights.assign(static_cast<std::size_t>(order), 2.0 * pi / static_cast<double>(order));
    for (int k = 0; k < order; ++k) {
      const double phi = 2.0 * pi * static_cast<double>(k) / static_cast<double>(order);
      q.nodes.push_back({std::cos(phi), std::sin(phi), 0.0});
    }
  } else {
    // Product rule: Gauss-Legendre in cos(theta) x uniform azimuth.
    std::vector<double> ct, wt;
    gauss_legendre(order, ct, wt);
    const double wphi = 2.0 * pi / static_cast<double>(order);
    q.nodes.reserve(static_cast<std::size_t>(order * order));
    q.weights.reserve(static_cast<std::size_t>(order * order));
    for (int i = 0; i < order; ++i) {
      const double c = ct[static_cast<std::size_t>(i)];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int j = 0; j < order; ++j) {
        const double phi = 2.0 * pi * static_cast<double>(j) / static_cast<double>(order);
        q.nodes.push_back({s * std::cos(phi), s * std::sin(phi), c});
        q.weights.push_back(wt[static_cast<std::size_t>(i)] * wphi);
      }
    }
  }
  return q;
}

std::pair<Vec3, Vec3> post_collision(const Vec3& u, const Vec3& v, const Vec3& omega) {
  if (std::abs(norm(omega) - 1.0) > 1e-12)
    throw std::invalid_argument("post_collision: omega must be a unit vector");
  return detail::post_collision_unchecked(u, v, omega);
}

}  // namespace kfix
