#pragma once

// Brute-force reference implementations used by the oracle-equivalence
// tests. Everything here is written as plain nested loops with its own
// interpolation and quadrature assembly, independent of the library's
// evaluation path; only the data types are shared.

#include <vector>

#include "kfix/contraction.hpp"
#include "kfix/field.hpp"
#include "kfix/grid.hpp"
#include "kfix/kernel.hpp"
#include "kfix/renorm.hpp"
#include "kfix/solver.hpp"

namespace oracle {

using kfix::DistributionField;
using kfix::KernelSpec;
using kfix::SolverConfig;
using kfix::SpatialGrid;
using kfix::SphereQuadrature;
using kfix::Vec3;
using kfix::VelocityGrid;

double kernel_B(const KernelSpec& k, const Vec3& omega, const Vec3& u, const Vec3& v);

double interp_velocity(const std::vector<double>& f, const VelocityGrid& vg, const Vec3& p);

std::vector<double> q_quadratic(const std::vector<double>& f, const KernelSpec& k,
                                const VelocityGrid& vg, const SphereQuadrature& sq);

std::vector<double> q_bilinear(const std::vector<double>& f, const std::vector<double>& g,
                               const KernelSpec& k, const VelocityGrid& vg,
                               const SphereQuadrature& sq);

double hypothesis_integral(const KernelSpec& k, const std::vector<double>& h,
                           const VelocityGrid& vg, const SphereQuadrature& sq, const Vec3& v);

double certify_l_estimate(const KernelSpec& k, const std::vector<const DistributionField*>& fields,
                          const VelocityGrid& vg, const SphereQuadrature& sq);

double l1_field(const DistributionField& f);

// Characteristic shift by its own periodic interpolation.
std::vector<double> shift_slice(const std::vector<double>& h, double t, const SpatialGrid& sg,
                                const VelocityGrid& vg, int direction);

std::vector<double> q_sharp(const DistributionField& f, std::size_t t_index, const KernelSpec& k,
                            const VelocityGrid& vg, const SphereQuadrature& sq);

DistributionField f_map(const DistributionField& g, const DistributionField& f2,
                        const SolverConfig& cfg);

std::vector<double> renorm_f_map(const DistributionField& g, const DistributionField& f2,
                                 const kfix::BetaFunction& b, const SolverConfig& cfg);

// Relative L1 distance of two slices, ||a - b||_1 / max(||a||_1, ||b||_1, floor).
double rel_l1(const std::vector<double>& a, const std::vector<double>& b, double floor = 1e-300);

}  // namespace oracle
