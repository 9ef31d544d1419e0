#include "kfix/solver.hpp"

#include <cmath>
#include <string>

namespace kfix {

void SolverConfig::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("solver: horizon must be positive");
  if (time_steps < 1) throw std::invalid_argument("solver: time_steps must be >= 1");
  if (max_picard_iters < 1) throw std::invalid_argument("solver: max_picard_iters must be >= 1");
  if (!(residual_tol > 0.0)) throw std::invalid_argument("solver: residual_tol must be positive");
  if (vgrid.dim != sgrid.dim) throw std::invalid_argument("solver: grid dims differ");
}

DistributionField constant_extension(std::span<const double> f0, const SolverConfig& cfg) {
  cfg.validate();
  DistributionField f(cfg.time_nodes(), cfg.sgrid, cfg.vgrid);
  if (f0.size() != f.slice_size())
    throw std::invalid_argument("constant_extension: f0 does not match the grids");
  for (std::size_t m = 0; m < f.num_times(); ++m)
    std::copy(f0.begin(), f0.end(), f.slice(m).begin());
  return f;
}

namespace {

void check_prev(const DistributionField& prev, std::span<const double> f0,
                const SolverConfig& cfg) {
  if (prev.time_nodes != cfg.time_nodes())
    throw std::invalid_argument("picard_step: iterate is not on the configured time grid");
  if (f0.size() != prev.slice_size())
    throw std::invalid_argument("picard_step: f0 does not match the grids");
  std::span<const double> first = prev.slice(0);
  for (std::size_t i = 0; i < f0.size(); ++i)
    if (first[i] != f0[i])
      throw std::invalid_argument("picard_step: iterate's t=0 slice must equal f0");
}

// Q^#(f,f) slices at every time node, then their cumulative trapezoid
// integral I_m = int_0^{t_m}. Shared by picard_step and residual.
std::vector<std::vector<double>> sharp_collision_integrals(const DistributionField& f,
                                                           const SolverConfig& cfg) {
  const std::size_t nt = f.num_times();
  const double dt = cfg.horizon / static_cast<double>(cfg.time_steps);

  std::vector<std::vector<double>> integral(nt);
  std::vector<double> prev_slice;
  std::vector<double> accum(f.slice_size(), 0.0);
  for (std::size_t m = 0; m < nt; ++m) {
    std::vector<double> qs = q_sharp(f, m, cfg.kernel, cfg.vgrid, cfg.squad);
    if (m > 0) {
      for (std::size_t i = 0; i < accum.size(); ++i)
        accum[i] += 0.5 * dt * (prev_slice[i] + qs[i]);
    }
    integral[m] = accum;
    prev_slice = std::move(qs);
  }
  return integral;
}

}  // namespace

DistributionField picard_step(const DistributionField& prev, std::span<const double> f0,
                              const SolverConfig& cfg) {
  cfg.validate();
  check_prev(prev, f0, cfg);

  const auto integrals = sharp_collision_integrals(prev, cfg);

  DistributionField next(cfg.time_nodes(), cfg.sgrid, cfg.vgrid);
  for (std::size_t m = 0; m < next.num_times(); ++m) {
    std::vector<double> sharp_slice(f0.size());
    for (std::size_t i = 0; i < f0.size(); ++i) sharp_slice[i] = f0[i] + integrals[m][i];
    const std::vector<double> lab =
        unsharp(sharp_slice, next.time_nodes[m], cfg.sgrid, cfg.vgrid);
    std::copy(lab.begin(), lab.end(), next.slice(m).begin());
  }

  if (!next.all_finite())
    throw BlowupError("picard_step: non-finite value in the new iterate (blow-up)");
  return next;
}

double residual(const DistributionField& f, std::span<const double> f0,
                const SolverConfig& cfg) {
  cfg.validate();
  if (f.time_nodes != cfg.time_nodes())
    throw std::invalid_argument("residual: field is not on the configured time grid");
  if (f0.size() != f.slice_size())
    throw std::invalid_argument("residual: f0 does not match the grids");

  const auto integrals = sharp_collision_integrals(f, cfg);

  DistributionField defect(cfg.time_nodes(), cfg.sgrid, cfg.vgrid);
  for (std::size_t m = 0; m < f.num_times(); ++m) {
    const std::vector<double> fs = sharp(f, m);
    auto out = defect.slice(m);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fs[i] - f0[i] - integrals[m][i];
  }
  return l1_norm(defect);
}

std::pair<DistributionField, IterationReport> solve_from(const DistributionField& start,
                                                         std::span<const double> f0,
                                                         const SolverConfig& cfg) {
  cfg.validate();
  IterationReport report;

  DistributionField prev = start;
  for (int k = 0; k < cfg.max_picard_iters; ++k) {
    DistributionField next = picard_step(prev, f0, cfg);
    const double dist = l1_norm(field_difference(next, prev));
    report.residuals.push_back(dist);
    report.min_values.push_back(field_min(next));
    report.iters_used = k + 1;
    prev = std::move(next);
    if (dist <= cfg.residual_tol) {
      report.converged = true;
      break;
    }
  }

  for (std::size_t i = 0; i + 1 < report.residuals.size(); ++i)
    report.contraction_ratios.push_back(
        report.residuals[i] > 0.0 ? report.residuals[i + 1] / report.residuals[i] : 0.0);
  return {std::move(prev), std::move(report)};
}

std::pair<DistributionField, IterationReport> solve(std::span<const double> f0,
                                                    const SolverConfig& cfg) {
  for (double v : f0)
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("solve: initial data must be finite and nonnegative");
  return solve_from(constant_extension(f0, cfg), f0, cfg);
}

}  // namespace kfix
