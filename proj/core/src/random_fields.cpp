#include "kfix/random_fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kfix {

double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace {

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * next_uniform(rng);
}

struct CosineMode {
  double amplitude;
  double freq[3];
  double phase[3];
};

// A handful of low-frequency cosine modes; evaluated per point.
std::vector<CosineMode> draw_modes(std::mt19937_64& rng, int dim, int count, double max_freq) {
  std::vector<CosineMode> modes(static_cast<std::size_t>(count));
  for (auto& m : modes) {
    m.amplitude = uniform_in(rng, -1.0, 1.0);
    for (int a = 0; a < 3; ++a) {
      m.freq[a] = a < dim ? std::floor(uniform_in(rng, 1.0, max_freq + 1.0)) : 0.0;
      m.phase[a] = a < dim ? uniform_in(rng, 0.0, 2.0 * std::numbers::pi) : 0.0;
    }
  }
  return modes;
}

double eval_modes(const std::vector<CosineMode>& modes, int dim, const double* coords,
                  double inv_scale) {
  double s = 0.0;
  for (const auto& m : modes) {
    double prod = m.amplitude;
    for (int a = 0; a < dim; ++a)
      prod *= std::cos(m.freq[a] * coords[a] * inv_scale + m.phase[a]);
    s += prod;
  }
  return s;
}

}  // namespace

std::vector<double> smooth_velocity_slice(const VelocityGrid& vg, std::mt19937_64& rng) {
  const auto modes = draw_modes(rng, vg.dim, 3, 3.0);
  const double inv_scale = std::numbers::pi / (2.0 * vg.extent);
  const double env = 1.0 / (vg.extent * vg.extent);
  std::vector<double> out(static_cast<std::size_t>(vg.num_nodes()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec3 v = vg.node(static_cast<int>(i));
    out[i] = eval_modes(modes, vg.dim, v.data(), inv_scale) * std::exp(-norm2(v) * env);
  }
  return out;
}

std::vector<double> smooth_phase_slice(const SpatialGrid& sg, const VelocityGrid& vg,
                                       std::mt19937_64& rng) {
  const std::vector<double> vs = smooth_velocity_slice(vg, rng);
  const std::size_t nx = static_cast<std::size_t>(sg.num_nodes());
  const std::size_t nv = vs.size();
  std::vector<double> out(nx * nv);
  if (sg.homogeneous()) {
    std::copy(vs.begin(), vs.end(), out.begin());
    return out;
  }
  const auto xmodes = draw_modes(rng, sg.dim, 2, 2.0);
  const double inv_scale = 2.0 * std::numbers::pi / sg.period;
  for (std::size_t ix = 0; ix < nx; ++ix) {
    const Vec3 x = sg.node(static_cast<int>(ix));
    const double sx = 1.0 + 0.5 * eval_modes(xmodes, sg.dim, x.data(), inv_scale);
    for (std::size_t iv = 0; iv < nv; ++iv) out[ix * nv + iv] = sx * vs[iv];
  }
  return out;
}

DistributionField smooth_field(const std::vector<double>& time_nodes, const SpatialGrid& sg,
                               const VelocityGrid& vg, std::mt19937_64& rng, double target_l1,
                               bool zero_initial_slice) {
  if (!(target_l1 > 0.0))
    throw std::invalid_argument("smooth_field: target L1 norm must be positive");

  DistributionField f(time_nodes, sg, vg);
  const std::vector<double> base = smooth_phase_slice(sg, vg, rng);
  const double horizon = time_nodes.back() > 0.0 ? time_nodes.back() : 1.0;
  const double tphase = uniform_in(rng, 0.0, 2.0 * std::numbers::pi);
  const double tamp = uniform_in(rng, 0.25, 0.75);

  for (std::size_t m = 0; m < f.num_times(); ++m) {
    double w = 1.0 + tamp * std::cos(std::numbers::pi * time_nodes[m] / horizon + tphase);
    if (zero_initial_slice) w *= time_nodes[m] / horizon;  // vanishes at t = 0
    auto out = f.slice(m);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = w * base[i];
  }

  const double norm = l1_norm(f);
  if (norm == 0.0) throw std::invalid_argument("smooth_field: degenerate draw");
  return field_scaled(f, target_l1 / norm);
}

}  // namespace kfix
