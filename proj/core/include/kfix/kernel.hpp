#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "kfix/field.hpp"
#include "kfix/grid.hpp"
#include "kfix/vec.hpp"

namespace kfix {

enum class KernelForm { hard_sphere, maxwell, variable_hard_sphere };

/**
 * Collision kernel B(omega, |u-v|) together with the structural constants
 * b1, b, mu used by the bound conditions:
 *
 *   hard_sphere:          B = C |(u-v) . omega|
 *   maxwell:              B = C |cos(theta)|, cos(theta) = (u-v).omega/|u-v|
 *   variable_hard_sphere: B = C |u-v|^lambda |cos(theta)|
 *
 * All forms are nonnegative and depend only on |u-v| and |(u-v) . omega|.
 * A vanishing relative velocity gives B = 0 for every form.
 */
struct KernelSpec {
  KernelForm form = KernelForm::hard_sphere;
  double strength = 1.0;  // C >= 0
  double lambda = 0.0;    // VHS exponent
  double b1 = 1.0;        // upper-bound constant, > 0
  double b = 1.0;         // lower-bound constant, > 0
  double mu = 0.0;        // speed exponent in the bounds, >= 0

  static KernelSpec hard_sphere(double strength, double b1, double b, double mu);
  static KernelSpec maxwell(double strength, double b1, double b, double mu);
  static KernelSpec variable_hard_sphere(double strength, double lambda, double b1, double b,
                                         double mu);
};

// B(omega, |u-v|); omega must be unit to 1e-12.
double evaluate(const KernelSpec& k, const Vec3& omega, const Vec3& u, const Vec3& v);

namespace detail {
// Kernel value from the relative velocity and its projection on omega;
// the hot collision loops use this directly.
inline double kernel_value(const KernelSpec& k, const Vec3& rel, double proj) {
  switch (k.form) {
    case KernelForm::hard_sphere:
      return k.strength * std::abs(proj);
    case KernelForm::maxwell: {
      const double r = norm(rel);
      return r > 0.0 ? k.strength * std::abs(proj) / r : 0.0;
    }
    case KernelForm::variable_hard_sphere: {
      const double r = norm(rel);
      return r > 0.0 ? k.strength * std::pow(r, k.lambda) * std::abs(proj) / r : 0.0;
    }
  }
  return 0.0;
}
}  // namespace detail

/**
 * Sampled certification of the kernel bounds
 *
 *   upper:  B(omega, r) <= b1 |r cos(theta)| / r (1 + r^mu)      per node
 *   lower:  int B domega >= b r (1 + r^mu)^{-1}                  per speed
 *
 * over the given relative speeds and quadrature nodes. The worst ratios
 * make failures diagnosable: worst_b2_ratio is the max of B over its
 * bound, worst_b3_ratio the min of the integral over its bound.
 */
struct BoundReport {
  bool b2_satisfied = false;
  bool b3_satisfied = false;
  double worst_b2_ratio = 0.0;
  double worst_b3_ratio = 0.0;
  int sample_count = 0;
};

BoundReport check_bounds(const KernelSpec& k, const SphereQuadrature& sq,
                         std::span<const double> speeds);

/**
 * Quadrature of  int int |h(u)| B(omega, |u-v|) domega du  at one v:
 * the left side of the Theorem-1 smallness hypothesis.
 */
double hypothesis_integral(const KernelSpec& k, std::span<const double> h,
                           const VelocityGrid& vg, const SphereQuadrature& sq, const Vec3& v);

struct HypothesisCertificate {
  double l_estimate = 0.0;  // max over fields and sampled (t, x, v)
  bool satisfied = false;   // l_estimate < 1
  int excluded_nodes = 0;   // velocity nodes with |v| < dv/2, skipped
};

/**
 * Certifies the Theorem-1 smallness hypotheses over a family of fields:
 * for each h in {f2} u g_list and each sampled (t, x, v) computes
 *
 *   L_h(v) = hypothesis_integral(h; v) * b1 (1 + |v|^mu) / |v|
 *
 * and reports the max. Nodes with |v| < dv/2 are excluded: the bound's
 * right side vanishes there and no nonzero field can meet it.
 */
HypothesisCertificate certify_theorem1_hypotheses(const KernelSpec& k,
                                                  const DistributionField& f2,
                                                  std::span<const DistributionField> g_list,
                                                  const VelocityGrid& vg,
                                                  const SphereQuadrature& sq);

}  // namespace kfix
