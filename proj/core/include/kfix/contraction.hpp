#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "kfix/solver.hpp"

namespace kfix {

/**
 * The perturbation map of the uniqueness argument:
 *
 *   F(g)(t) = int_0^t Q^#(f2+g, f2+g) dtau - int_0^t Q^#(f2, f2) dtau
 *
 * evaluated with composite trapezoid in tau. Slices of the returned field
 * are the characteristic-frame accumulations exactly as written; g = 0 is
 * a fixed point (the result is identically zero, no quadrature noise).
 */
DistributionField f_map(const DistributionField& g, const DistributionField& f2,
                        const SolverConfig& cfg);

/**
 * Checks the algebraic regrouping at the heart of the contraction proof:
 *
 *   Q^#(f2+g1, f2+g1) - Q^#(f2+g2, f2+g2)
 *     = 2 Q^#(f2, g1-g2) + Q^#(g1, g1) - Q^#(g2, g2)
 *
 * (four f2-cross terms plus four g-cross terms). Returns the L1 norm of
 * the difference of the two routes over the whole field; the identity is
 * exact algebra, so anything above roundoff is a defect.
 */
double bilinear_difference_identity_check(const DistributionField& g1,
                                          const DistributionField& g2,
                                          const DistributionField& f2, const SolverConfig& cfg);

struct ContractionReport {
  double hypothesis_l = 0.0;  // from certify_theorem1_hypotheses
  int excluded_nodes = 0;
  std::vector<double> empirical_ratios;
  double max_ratio = 0.0;
  int pairs_tested = 0;
  int pairs_skipped = 0;  // ||g1 - g2|| below the degeneracy cutoff
  double slack = 0.0;
  bool passed = false;  // hypothesis_l < 1 and max_ratio <= hypothesis_l + slack
};

/**
 * Measures ||F(g1) - F(g2)|| / ||g1 - g2|| over the given pairs and
 * certifies the smallness hypotheses over {f2} and all pair members.
 * Pairs closer than 1e-14 in L1 are skipped; an all-degenerate list is
 * rejected. The slack absorbs interpolation and time-quadrature error.
 */
ContractionReport empirical_contraction(
    const std::vector<std::pair<DistributionField, DistributionField>>& pairs,
    const DistributionField& f2, const SolverConfig& cfg, double slack = 0.15);

struct UniquenessReport {
  int runs = 0;
  bool conclusive = false;  // every run converged
  bool passed = false;      // conclusive and max_distance <= threshold
  double max_distance = 0.0;
  double threshold = 0.0;  // 10 * residual_tol
  std::vector<double> pairwise_distances;
  std::vector<int> iterations;
  std::vector<bool> converged;
};

/**
 * The operational form of the uniqueness theorem: runs the Picard solver
 * from n distinct first iterates (the f0 extension plus seeded smooth
 * perturbations of its t > 0 slices) and measures the pairwise L1
 * distances of the returned fixed points. Non-convergence of any run
 * makes the experiment inconclusive rather than failed.
 */
UniquenessReport uniqueness_experiment(std::span<const double> f0, const SolverConfig& cfg,
                                       int n_perturbations, std::uint64_t seed,
                                       double perturbation_scale);

}  // namespace kfix
