#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kfix/kernel.hpp"
#include "kfix/renorm.hpp"
#include "kfix/solver.hpp"

namespace kfix {

enum class Scenario { solve, check_kernel, contraction, uniqueness, renorm_check };

std::optional<Scenario> scenario_from_name(std::string_view name);
std::string_view scenario_name(Scenario s);

enum class InitialType { vacuum, maxwellian };

/**
 * Fully validated run description. The file grammar is `key = value`
 * lines under `[section]` headers with `#` comments; every numeric key is
 * checked against its module's preconditions before any computation
 * starts, and validation reports all violations, not just the first.
 */
struct RunConfig {
  Scenario scenario = Scenario::solve;

  // [grid]
  int dim = 3;
  double velocity_extent = 4.0;
  int velocity_nodes = 9;
  int sphere_order = 6;
  int spatial_nodes = 1;
  double spatial_period = 1.0;

  // [kernel]
  KernelForm kernel_form = KernelForm::hard_sphere;
  double kernel_strength = 1.0;
  double kernel_lambda = 0.0;
  double kernel_b1 = 1.0;
  double kernel_b = 1.0;
  double kernel_mu = 0.0;

  // [initial]
  InitialType initial_type = InitialType::maxwellian;
  double initial_amplitude = 1.0;
  double initial_width = 1.0;
  double initial_space_variation = 0.0;

  // [solver]
  double horizon = 0.5;
  int time_steps = 8;
  int max_picard_iters = 50;
  double residual_tol = 1e-10;

  // [experiment]
  std::uint64_t seed = 0;
  int perturbations = 3;
  int pairs = 20;
  double perturbation_scale = 0.01;
  double contraction_slack = 0.15;
  int speed_samples = 32;

  // [renorm]
  BetaForm beta_form = BetaForm::log1p;
  double beta_scale = 1.0;
  double beta_saturation = 1.0;

  // [output]
  std::string output_dir = "out";
  int snapshot_interval = 0;
};

struct ConfigError {
  int line = 0;  // 0 when no single line is at fault
  std::string message;
};

struct ParseResult {
  std::optional<RunConfig> config;  // set iff errors is empty
  std::vector<ConfigError> errors;
};

ParseResult parse_config(std::string_view text);

// Assembled pieces for the library modules.
SolverConfig build_solver_config(const RunConfig& rc);
std::vector<double> initial_slice(const RunConfig& rc, const SolverConfig& sc);
BetaFunction beta_from_config(const RunConfig& rc);

}  // namespace kfix
