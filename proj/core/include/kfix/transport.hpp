#pragma once

#include <span>
#include <vector>

#include "kfix/collision.hpp"
#include "kfix/field.hpp"

namespace kfix {

/**
 * Characteristic shift of a space x velocity slice on the periodic domain:
 *
 *   out(x, v) = h((x + direction * v * t) mod period, v)
 *
 * by periodic multilinear interpolation in x. t == 0 and the homogeneous
 * mode return the slice unchanged (exact copy, no interpolation), which
 * keeps those cases bit-exact.
 */
std::vector<double> characteristic_shift(std::span<const double> h, double t,
                                         const SpatialGrid& sg, const VelocityGrid& vg,
                                         int direction);

// f^#(t_i, x, v) = f(t_i, x + v t_i, v): the slice of f at time index
// t_index viewed along free-streaming characteristics.
std::vector<double> sharp(const DistributionField& f, std::size_t t_index);

// Inverse view: unsharp(sharp(f, t), t) ~= f up to interpolation error,
// exact on shift-aligned cases.
std::vector<double> unsharp(std::span<const double> h, double t, const SpatialGrid& sg,
                            const VelocityGrid& vg);

/**
 * Q^#(f,f) at one time node: the collision operator applied per spatial
 * node to the laboratory-frame slice, then shifted along characteristics,
 * i.e. Q(f,f)(t, x + vt, v). In homogeneous mode this is exactly
 * q_quadratic of the velocity slice.
 */
std::vector<double> q_sharp(const DistributionField& f, std::size_t t_index, const KernelSpec& k,
                            const VelocityGrid& vg, const SphereQuadrature& sq);

// Same composition for the symmetrized bilinear operator Q^#(f, g).
std::vector<double> q_sharp_bilinear(const DistributionField& f, const DistributionField& g,
                                     std::size_t t_index, const KernelSpec& k,
                                     const VelocityGrid& vg, const SphereQuadrature& sq);

}  // namespace kfix
