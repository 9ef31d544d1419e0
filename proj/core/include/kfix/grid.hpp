#pragma once

#include <utility>
#include <vector>

#include "kfix/vec.hpp"

namespace kfix {

/**
 * Uniform velocity grid on [-extent, extent]^dim.
 *
 * The node count per axis is odd so that the origin is a node and the grid
 * is symmetric about it (for every node u, -u is also a node); the
 * conservation property tests rely on that symmetry.
 */
struct VelocityGrid {
  int dim = 3;             // 2 or 3
  double extent = 0.0;     // grid covers [-extent, extent]^dim
  int nodes_per_axis = 0;  // odd, >= 5
  double spacing = 0.0;    // 2*extent/(nodes_per_axis-1)

  int num_nodes() const;
  // Axis coordinate of node index i: -extent + i*spacing.
  double coord(int i) const { return -extent + spacing * static_cast<double>(i); }
  // Node of a flat index (row-major, first axis slowest). Unused components 0.
  Vec3 node(int flat) const;
  // Quadrature weight of one node, spacing^dim.
  double cell_volume() const;
};

VelocityGrid build_velocity_grid(int dim, double extent, int nodes_per_axis);

/**
 * Periodic spatial grid on [0, period)^dim with nodes j*period/n.
 * nodes_per_axis == 1 selects the spatially homogeneous mode, in which
 * transport is the identity and the spatial quadrature weight is 1.
 */
struct SpatialGrid {
  int dim = 3;
  double period = 1.0;
  int nodes_per_axis = 1;

  bool homogeneous() const { return nodes_per_axis == 1; }
  double spacing() const { return period / static_cast<double>(nodes_per_axis); }
  int num_nodes() const;
  Vec3 node(int flat) const;
  // Quadrature weight of one node: spacing^dim, or 1 in homogeneous mode.
  double cell_volume() const;
};

SpatialGrid build_spatial_grid(int dim, double period, int nodes_per_axis);

/**
 * Quadrature rule for integrals over the unit sphere (dim 3) or circle
 * (dim 2). Weights sum to the surface measure: 4*pi resp. 2*pi.
 */
struct SphereQuadrature {
  int dim = 3;
  std::vector<Vec3> nodes;      // unit vectors
  std::vector<double> weights;  // positive, sum = surface measure
};

// dim 2: `order` equally spaced angles, weight 2*pi/order each.
// dim 3: Gauss-Legendre in cos(theta) x uniform azimuth, order^2 nodes.
SphereQuadrature build_sphere_quadrature(int dim, int order);

// Gauss-Legendre nodes/weights on [-1, 1] (Newton on the Legendre
// recurrence). Exposed for tests; build_sphere_quadrature uses it.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/**
 * Post-collision velocity pair for impact direction omega:
 *
 *   u' = u - omega (omega . (u - v)),  v' = v + omega (omega . (u - v)).
 *
 * Conserves u+v and |u|^2+|v|^2 exactly up to roundoff, and is an
 * involution in the pair. Throws std::invalid_argument unless
 * | |omega| - 1 | <= 1e-12.
 */
std::pair<Vec3, Vec3> post_collision(const Vec3& u, const Vec3& v, const Vec3& omega);

namespace detail {
// Same map without the unit-length check; collision quadrature loops call
// this with nodes that are unit by construction.
inline std::pair<Vec3, Vec3> post_collision_unchecked(const Vec3& u, const Vec3& v,
                                                      const Vec3& omega) {
  const double d = dot(omega, sub(u, v));
  return {sub(u, scaled(omega, d)), add(v, scaled(omega, d))};
}
}  // namespace detail

}  // namespace kfix
