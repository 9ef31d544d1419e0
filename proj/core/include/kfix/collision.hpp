#pragma once

#include <span>
#include <vector>

#include "kfix/field.hpp"
#include "kfix/grid.hpp"
#include "kfix/kernel.hpp"

namespace kfix {

/**
 * Gain/loss split of a collision operator evaluation on one velocity
 * slice. total = gain - loss elementwise by construction; gain and loss
 * are individually nonnegative for nonnegative inputs.
 */
struct CollisionResult {
  std::vector<double> gain;
  std::vector<double> loss;
  std::vector<double> total;
};

/**
 * Quadratic collision operator
 *
 *   Q(f,f)(v) = sum_u sum_k w_k dv^n B(omega_k, |u-v|)
 *               [ f(u') f(v') - f(u) f(v) ]
 *
 * with (u', v') from post_collision and off-grid values by multilinear
 * interpolation (0 outside the grid hull). O(N_v^2 N_omega) per slice;
 * the brute-force transparency is deliberate, it is what the oracle
 * tests certify against.
 */
CollisionResult q_quadratic(std::span<const double> f, const KernelSpec& k,
                            const VelocityGrid& vg, const SphereQuadrature& sq);

/**
 * Symmetrized bilinear collision operator
 *
 *   Q(f,g)(v) = 1/2 sum_u sum_k w_k dv^n B(omega_k, |u-v|)
 *               [ f(v')g(u') + f(u')g(v') - f(u)g(v) - f(v)g(u) ].
 *
 * Symmetric in (f, g) and equal to q_quadratic at f = g.
 */
CollisionResult q_bilinear(std::span<const double> f, std::span<const double> g,
                           const KernelSpec& k, const VelocityGrid& vg,
                           const SphereQuadrature& sq);

// Moments of r.total: the discrete conservation defect. The continuum
// operator conserves mass, momentum and energy; the defect is tracked as
// a diagnostic, not corrected.
Moments conservation_defect(const CollisionResult& r, const VelocityGrid& vg);

}  // namespace kfix
