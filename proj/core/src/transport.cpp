#include "kfix/transport.hpp"

#include <stdexcept>

#include "kfix/parallel.hpp"

namespace kfix {

std::vector<double> characteristic_shift(std::span<const double> h, double t,
                                         const SpatialGrid& sg, const VelocityGrid& vg,
                                         int direction) {
  const std::size_t nx = static_cast<std::size_t>(sg.num_nodes());
  const std::size_t nv = static_cast<std::size_t>(vg.num_nodes());
  if (h.size() != nx * nv)
    throw std::invalid_argument("characteristic_shift: slice does not match the grids");

  std::vector<double> out(h.size());
  if (sg.homogeneous() || t == 0.0) {
    std::copy(h.begin(), h.end(), out.begin());
    return out;
  }

  const double s = static_cast<double>(direction) * t;
  parallel_for(nv, [&](std::size_t iv) {
    const Vec3 vel = vg.node(static_cast<int>(iv));
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const Vec3 x = sg.node(static_cast<int>(ix));
      const Vec3 q{x[0] + s * vel[0], x[1] + s * vel[1], x[2] + s * vel[2]};
      out[ix * nv + iv] = interp_space_periodic(h, sg, nv, iv, q);
    }
  });
  return out;
}

std::vector<double> sharp(const DistributionField& f, std::size_t t_index) {
  if (t_index >= f.num_times()) throw std::invalid_argument("sharp: time index out of range");
  return characteristic_shift(f.slice(t_index), f.time_nodes[t_index], f.sgrid, f.vgrid, +1);
}

std::vector<double> unsharp(std::span<const double> h, double t, const SpatialGrid& sg,
                            const VelocityGrid& vg) {
  return characteristic_shift(h, t, sg, vg, -1);
}

namespace {

template <typename CollideSlice>
std::vector<double> q_sharp_generic(const DistributionField& f, std::size_t t_index,
                                    const CollideSlice& collide) {
  if (t_index >= f.num_times())
    throw std::invalid_argument("q_sharp: time index out of range");
  const std::size_t nx = f.num_space();
  const std::size_t nv = f.num_vel();
  std::span<const double> lab = f.slice(t_index);

  std::vector<double> q(nx * nv);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    const std::vector<double> qv = collide(ix, lab.subspan(ix * nv, nv));
    std::copy(qv.begin(), qv.end(), q.begin() + static_cast<std::ptrdiff_t>(ix * nv));
  }
  return characteristic_shift(q, f.time_nodes[t_index], f.sgrid, f.vgrid, +1);
}

}  // namespace

std::vector<double> q_sharp(const DistributionField& f, std::size_t t_index, const KernelSpec& k,
                            const VelocityGrid& vg, const SphereQuadrature& sq) {
  return q_sharp_generic(f, t_index, [&](std::size_t, std::span<const double> slice) {
    return q_quadratic(slice, k, vg, sq).total;
  });
}

std::vector<double> q_sharp_bilinear(const DistributionField& f, const DistributionField& g,
                                     std::size_t t_index, const KernelSpec& k,
                                     const VelocityGrid& vg, const SphereQuadrature& sq) {
  if (!f.shape_matches(g))
    throw std::invalid_argument("q_sharp_bilinear: fields must share grids");
  const std::size_t nv = f.num_vel();
  std::span<const double> glab = g.slice(t_index);
  return q_sharp_generic(f, t_index, [&](std::size_t ix, std::span<const double> slice) {
    return q_bilinear(slice, glab.subspan(ix * nv, nv), k, vg, sq).total;
  });
}

}  // namespace kfix
