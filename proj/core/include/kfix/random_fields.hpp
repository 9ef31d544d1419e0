#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kfix/field.hpp"

namespace kfix {

// Deterministic uniform double in [0, 1) from the raw generator output;
// avoids std::uniform_real_distribution so streams are reproducible
// byte-for-byte across standard libraries.
double next_uniform(std::mt19937_64& rng);

/**
 * Smooth random velocity slice: a short random cosine sum per axis under
 * a Gaussian envelope, so perturbations decay toward the grid boundary
 * and hypothesis certification stays meaningful.
 */
std::vector<double> smooth_velocity_slice(const VelocityGrid& vg, std::mt19937_64& rng);

// Smooth random space x velocity slice (periodic cosine modes in x).
std::vector<double> smooth_phase_slice(const SpatialGrid& sg, const VelocityGrid& vg,
                                       std::mt19937_64& rng);

/**
 * Smooth random field over the whole time x space x velocity grid,
 * scaled to the prescribed L1 norm. zero_initial_slice forces the t = 0
 * slice to zero, which is how solver starts are perturbed without
 * touching the initial condition.
 */
DistributionField smooth_field(const std::vector<double>& time_nodes, const SpatialGrid& sg,
                               const VelocityGrid& vg, std::mt19937_64& rng, double target_l1,
                               bool zero_initial_slice = false);

}  // namespace kfix
