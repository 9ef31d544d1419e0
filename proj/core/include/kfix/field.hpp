#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kfix/grid.hpp"
#include "kfix/vec.hpp"

namespace kfix {

/**
 * A phase-space density f(t, x, v) sampled on a time x space x velocity
 * grid, stored row-major as [time][space][velocity] in laboratory
 * coordinates. The central state object of the solver; immutable once
 * filled (operations return fresh fields).
 */
struct DistributionField {
  std::vector<double> time_nodes;  // 0 = t_0 < ... < t_M = T
  SpatialGrid sgrid;
  VelocityGrid vgrid;
  std::vector<double> values;  // size = time * space * velocity

  DistributionField() = default;
  DistributionField(std::vector<double> times, SpatialGrid sg, VelocityGrid vg);

  std::size_t num_times() const { return time_nodes.size(); }
  std::size_t num_space() const { return static_cast<std::size_t>(sgrid.num_nodes()); }
  std::size_t num_vel() const { return static_cast<std::size_t>(vgrid.num_nodes()); }
  std::size_t slice_size() const { return num_space() * num_vel(); }

  double& at(std::size_t t, std::size_t x, std::size_t v);
  double at(std::size_t t, std::size_t x, std::size_t v) const;

  // Space x velocity slice at one time node.
  std::span<double> slice(std::size_t t);
  std::span<const double> slice(std::size_t t) const;

  bool shape_matches(const DistributionField& other) const;
  bool all_finite() const;
};

// Uniform time nodes m*T/M for m = 0..M.
std::vector<double> uniform_time_nodes(double horizon, int steps);

/**
 * L1 norm over the full time x space x velocity grid:
 *
 *   sum |values| * dt * dx^n * dv^n
 *
 * with uniform (composite rectangle) dt weight per time node, spatial
 * weight 1 in homogeneous mode, and dt = 1 for single-time-node fields.
 */
double l1_norm(const DistributionField& f);

// L1 of one space x velocity slice with dx^n (or 1) * dv^n weights.
double slice_l1(std::span<const double> slice, const SpatialGrid& sg, const VelocityGrid& vg);

// L1 of one velocity slice with dv^n weights.
double velocity_l1(std::span<const double> slice, const VelocityGrid& vg);

struct Moments {
  double mass = 0.0;
  Vec3 momentum{0.0, 0.0, 0.0};
  double energy = 0.0;
};

// mass = sum f dv^n, momentum = sum v f dv^n, energy = sum |v|^2 f dv^n.
Moments compute_moments(std::span<const double> f, const VelocityGrid& vg);

/**
 * Multilinear interpolation of a velocity slice at an off-grid point.
 * Points outside [-extent, extent]^dim blend to 0 (the grid is extended
 * by one ring of zero ghost nodes), consistent with decaying
 * distributions.
 */
double interp_velocity(std::span<const double> f, const VelocityGrid& vg, const Vec3& p);

/**
 * Periodic multilinear interpolation of one velocity component of a
 * space x velocity slice: h(x_query, v_flat) for x_query wrapped into
 * [0, period)^dim.
 */
double interp_space_periodic(std::span<const double> h, const SpatialGrid& sg,
                             std::size_t num_vel, std::size_t v_flat, const Vec3& x_query);

// Elementwise helpers used throughout the solver and experiments.
DistributionField field_difference(const DistributionField& a, const DistributionField& b);
DistributionField field_sum(const DistributionField& a, const DistributionField& b);
DistributionField field_scaled(const DistributionField& a, double s);
double field_min(const DistributionField& a);

}  // namespace kfix
