#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kfix/solver.hpp"

namespace kfix {

enum class BetaForm { log1p, scaled_log1p, custom_rational };

/**
 * Renormalization function beta: R+ -> R, nondecreasing, with the
 * admissibility bound |beta'(t)| <= c/(1+t) certified by a logarithmic
 * sample sweep over [0, 1e6].
 *
 *   log1p:            beta(t) = ln(1+t),           c = 1
 *   scaled_log1p:     beta(t) = s ln(1+t),         c = s
 *   custom_rational:  beta(t) = s t/(1 + t/sat),   c from the sweep
 *
 * A huge saturation makes custom_rational exactly linear over the swept
 * range in double precision, which is the "beta' constant" test case.
 * `offset` shifts beta pointwise without touching beta'.
 */
struct BetaFunction {
  BetaForm form = BetaForm::log1p;
  double c = 1.0;
  double scale = 1.0;
  double saturation = 1.0;
  double offset = 0.0;

  static BetaFunction log1p_form();
  static BetaFunction scaled_log1p(double scale);
  static BetaFunction custom_rational(double scale, double saturation);

  BetaFunction shifted(double delta) const;
};

// The shared certification sweep: t = 0 and a log-spaced ladder up to 1e6.
const std::vector<double>& beta_bound_sweep();

double beta_eval(const BetaFunction& b, double t);   // t < 0 rejected
double beta_prime(const BetaFunction& b, double t);  // t < 0 rejected

// max over the sweep of |beta'(t)| (1+t); admissible iff <= c.
double beta_bound_worst(const BetaFunction& b);
bool beta_bound_satisfied(const BetaFunction& b);

// Global Lipschitz bound on R+ (the built-in forms have decreasing
// derivative, so this is beta'(0)).
double beta_lipschitz_bound(const BetaFunction& b);

// beta applied elementwise to a slice; negative entries are clipped to 0
// before evaluation (beta's domain) and counted.
std::vector<double> beta_of_slice(const BetaFunction& b, std::span<const double> f,
                                  std::size_t* clipped = nullptr);
std::vector<double> beta_prime_of_slice(const BetaFunction& b, std::span<const double> f,
                                        std::size_t* clipped = nullptr);

struct RenormResidualReport {
  double residual_l1 = 0.0;
  double dt = 0.0;
  double dx = 0.0;
  double dv = 0.0;
  std::size_t clipped_count = 0;  // negative values clipped for beta
  BetaFunction beta_used;
};

/**
 * L1 defect of the renormalized equation
 *
 *   d/dt beta(f) + v . grad_x beta(f) - beta'(f) Q(f,f)
 *
 * with second-order finite differences in t (one-sided at 0 and T),
 * centered periodic differences in x, and the discrete collision
 * operator. Needs at least two time nodes.
 */
RenormResidualReport renorm_residual(const DistributionField& f, const BetaFunction& b,
                                     const SolverConfig& cfg);

struct Theorem2Conditions {
  bool ordering_ok = false;  // beta1 >= beta2 + sqrt(c) over the sweep
  double q_integral = 0.0;   // L1 in (x,v) of int_0^T Q^#(g,g) dt
  bool q_ok = false;         // q_integral < 1
};

// The two Theorem-2 hypotheses, checked by sampling; c is the larger of
// the two functions' constants.
Theorem2Conditions theorem2_condition_check(const BetaFunction& b1, const BetaFunction& b2,
                                            const DistributionField& g, const SolverConfig& cfg);

/**
 * The renormalized perturbation map, one space x velocity slice:
 *
 *   beta^#(f2+g)(0) - beta^#(f2)(0)
 *     + int_0^T [ beta'^#(f2+g) Q^#(f2+g, f2+g)
 *               - beta'^#(f2)   Q^#(f2, f2) ] dt
 *
 * trapezoid in t; beta and beta' are applied pointwise in the laboratory
 * frame and then shifted along characteristics. g = 0 returns the zero
 * slice exactly.
 */
std::vector<double> renorm_f_map(const DistributionField& g, const DistributionField& f2,
                                 const BetaFunction& b, const SolverConfig& cfg);

struct RenormUniquenessReport {
  bool conclusive = false;
  bool passed = false;
  double beta_distance = 0.0;
  double raw_distance = 0.0;
  double threshold = 0.0;  // 10 * residual_tol * Lipschitz bound of beta
  std::vector<int> iterations;
};

/**
 * Theorem 2 operationalized: two Picard runs from perturbed first
 * iterates, both mapped through beta; passes when the beta-distance of
 * the fixed points stays within the solver-tolerance-derived threshold.
 * Inconclusive (not failed) if either run does not converge.
 */
RenormUniquenessReport renorm_uniqueness_experiment(std::span<const double> f0,
                                                    const SolverConfig& cfg,
                                                    const BetaFunction& b, std::uint64_t seed,
                                                    double perturbation_scale);

}  // namespace kfix
