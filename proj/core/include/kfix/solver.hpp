#pragma once

#include <stdexcept>
#include <vector>

#include "kfix/field.hpp"
#include "kfix/kernel.hpp"
#include "kfix/transport.hpp"

namespace kfix {

/**
 * Everything a solver run needs: grids, kernel, horizon and iteration
 * control. time nodes are uniform, t_m = m * horizon / time_steps.
 */
struct SolverConfig {
  double horizon = 1.0;        // T > 0
  int time_steps = 1;          // M >= 1
  int max_picard_iters = 50;   // >= 1
  double residual_tol = 1e-10; // > 0
  VelocityGrid vgrid;
  SpatialGrid sgrid;
  SphereQuadrature squad;
  KernelSpec kernel;

  void validate() const;
  std::vector<double> time_nodes() const { return uniform_time_nodes(horizon, time_steps); }
};

/**
 * Per-run Picard diagnostics. residuals[k] is the L1 distance between
 * successive iterates; contraction_ratios[k] = residuals[k+1]/residuals[k]
 * is the empirical counterpart of the contraction constant L. min_values
 * monitors (does not enforce) nonnegativity of each iterate.
 */
struct IterationReport {
  std::vector<double> residuals;
  std::vector<double> contraction_ratios;
  std::vector<double> min_values;
  bool converged = false;
  int iters_used = 0;
};

// Non-finite values during a Picard step: the blow-up signal.
struct BlowupError : std::runtime_error {
  explicit BlowupError(const std::string& what) : std::runtime_error(what) {}
};

// The iterate every solve starts from: f(t_m) = f0 for all m.
DistributionField constant_extension(std::span<const double> f0, const SolverConfig& cfg);

/**
 * One Picard sweep of the mild formulation:
 *
 *   next^#(t_m) = f0 + int_0^{t_m} Q^#(prev, prev)(tau) dtau
 *
 * with composite trapezoid in tau; the result is stored back in
 * laboratory coordinates. prev must carry f0 as its t=0 slice.
 */
DistributionField picard_step(const DistributionField& prev, std::span<const double> f0,
                              const SolverConfig& cfg);

// L1 defect of the mild equation: || f^#(t) - f0 - int_0^t Q^# dtau ||.
double residual(const DistributionField& f, std::span<const double> f0,
                const SolverConfig& cfg);

// Picard iteration from the constant-in-time extension of f0 until the
// successive-iterate distance drops below residual_tol or the iteration
// budget runs out (which reports converged = false, not an error).
std::pair<DistributionField, IterationReport> solve(std::span<const double> f0,
                                                    const SolverConfig& cfg);

// Same iteration from a caller-supplied first iterate (its t=0 slice must
// equal f0); this is how the uniqueness experiments vary the start.
std::pair<DistributionField, IterationReport> solve_from(const DistributionField& start,
                                                         std::span<const double> f0,
                                                         const SolverConfig& cfg);

}  // namespace kfix
