#include "kfix/collision.hpp"

#include <cmath>
#include <stdexcept>

#include "kfix/parallel.hpp"

namespace kfix {

namespace {

// Multilinear interpolation in grid coordinates (node i sits at
// coordinate i). Zero beyond the one-cell ghost ring; fast unrolled path
// for fully interior cells, per-corner validity otherwise. The fractional
// weights are clamped at 0 so nonnegative inputs never interpolate to
// negative values.
inline double interp3_grid(const double* f, int n, double cx, double cy, double cz) {
  const double nd = static_cast<double>(n);
  if (!(cx > -1.0 && cx < nd && cy > -1.0 && cy < nd && cz > -1.0 && cz < nd)) return 0.0;
  const int ix = static_cast<int>(cx + 1.0) - 1;
  const int iy = static_cast<int>(cy + 1.0) - 1;
  const int iz = static_cast<int>(cz + 1.0) - 1;
  double tx = cx - ix, ty = cy - iy, tz = cz - iz;
  if (tx < 0.0) tx = 0.0;
  if (ty < 0.0) ty = 0.0;
  if (tz < 0.0) tz = 0.0;

  const std::size_t sy = static_cast<std::size_t>(n);
  const std::size_t sx = sy * sy;
  if (static_cast<unsigned>(ix) < static_cast<unsigned>(n - 1) &&
      static_cast<unsigned>(iy) < static_cast<unsigned>(n - 1) &&
      static_cast<unsigned>(iz) < static_cast<unsigned>(n - 1)) {
    const double* p = f + static_cast<std::size_t>(ix) * sx + static_cast<std::size_t>(iy) * sy +
                      static_cast<std::size_t>(iz);
    const double c00 = p[0] + tz * (p[1] - p[0]);
    const double c01 = p[sy] + tz * (p[sy + 1] - p[sy]);
    const double c10 = p[sx] + tz * (p[sx + 1] - p[sx]);
    const double c11 = p[sx + sy] + tz * (p[sx + sy + 1] - p[sx + sy]);
    const double c0 = c00 + ty * (c01 - c00);
    const double c1 = c10 + ty * (c11 - c10);
    return c0 + tx * (c1 - c0);
  }

  // boundary cell: gather valid corners only
  const bool vx0 = ix >= 0 && ix < n, vx1 = ix + 1 >= 0 && ix + 1 < n;
  const bool vy0 = iy >= 0 && iy < n, vy1 = iy + 1 >= 0 && iy + 1 < n;
  const bool vz0 = iz >= 0 && iz < n, vz1 = iz + 1 >= 0 && iz + 1 < n;
  auto cell = [&](bool ok, int i, int j, int l) {
    return ok ? f[static_cast<std::size_t>(i) * sx + static_cast<std::size_t>(j) * sy +
                  static_cast<std::size_t>(l)]
              : 0.0;
  };
  const double c00 = cell(vx0 && vy0 && vz0, ix, iy, iz) * (1.0 - tz) +
                     cell(vx0 && vy0 && vz1, ix, iy, iz + 1) * tz;
  const double c01 = cell(vx0 && vy1 && vz0, ix, iy + 1, iz) * (1.0 - tz) +
                     cell(vx0 && vy1 && vz1, ix, iy + 1, iz + 1) * tz;
  const double c10 = cell(vx1 && vy0 && vz0, ix + 1, iy, iz) * (1.0 - tz) +
                     cell(vx1 && vy0 && vz1, ix + 1, iy, iz + 1) * tz;
  const double c11 = cell(vx1 && vy1 && vz0, ix + 1, iy + 1, iz) * (1.0 - tz) +
                     cell(vx1 && vy1 && vz1, ix + 1, iy + 1, iz + 1) * tz;
  const double c0 = c00 * (1.0 - ty) + c01 * ty;
  const double c1 = c10 * (1.0 - ty) + c11 * ty;
  return c0 * (1.0 - tx) + c1 * tx;
}

inline double interp2_grid(const double* f, int n, double cx, double cy) {
  const double nd = static_cast<double>(n);
  if (!(cx > -1.0 && cx < nd && cy > -1.0 && cy < nd)) return 0.0;
  const int ix = static_cast<int>(cx + 1.0) - 1;
  const int iy = static_cast<int>(cy + 1.0) - 1;
  double tx = cx - ix, ty = cy - iy;
  if (tx < 0.0) tx = 0.0;
  if (ty < 0.0) ty = 0.0;

  const std::size_t sx = static_cast<std::size_t>(n);
  if (static_cast<unsigned>(ix) < static_cast<unsigned>(n - 1) &&
      static_cast<unsigned>(iy) < static_cast<unsigned>(n - 1)) {
    const double* p = f + static_cast<std::size_t>(ix) * sx + static_cast<std::size_t>(iy);
    const double c0 = p[0] + ty * (p[1] - p[0]);
    const double c1 = p[sx] + ty * (p[sx + 1] - p[sx]);
    return c0 + tx * (c1 - c0);
  }
  const bool vx0 = ix >= 0 && ix < n, vx1 = ix + 1 >= 0 && ix + 1 < n;
  const bool vy0 = iy >= 0 && iy < n, vy1 = iy + 1 >= 0 && iy + 1 < n;
  auto cell = [&](bool ok, int i, int j) {
    return ok ? f[static_cast<std::size_t>(i) * sx + static_cast<std::size_t>(j)] : 0.0;
  };
  const double c0 =
      cell(vx0 && vy0, ix, iy) * (1.0 - ty) + cell(vx0 && vy1, ix, iy + 1) * ty;
  const double c1 =
      cell(vx1 && vy0, ix + 1, iy) * (1.0 - ty) + cell(vx1 && vy1, ix + 1, iy + 1) * ty;
  return c0 * (1.0 - tx) + c1 * tx;
}

template <int DIM, bool QUADRATIC>
void collide_impl(const double* f, const double* g, const KernelSpec& k, const VelocityGrid& vg,
                  const SphereQuadrature& sq, double* gain_out, double* loss_out) {
  const int n = vg.nodes_per_axis;
  const std::size_t nv = static_cast<std::size_t>(vg.num_nodes());
  const std::size_t nw = sq.nodes.size();
  const double inv_dv = 1.0 / vg.spacing;
  const double scale = (QUADRATIC ? 1.0 : 0.5) * vg.cell_volume();
  const bool hard_sphere = k.form == KernelForm::hard_sphere;

  std::vector<double> axis(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) axis[static_cast<std::size_t>(i)] = vg.coord(i);

  // omega components in physical units for the projection and in grid
  // units for the post-collision coordinate shift
  std::vector<double> ox(nw), oy(nw), oz(nw), gx(nw), gy(nw), gz(nw), ow(nw);
  for (std::size_t m = 0; m < nw; ++m) {
    ox[m] = sq.nodes[m][0];
    oy[m] = sq.nodes[m][1];
    oz[m] = sq.nodes[m][2];
    gx[m] = ox[m] * inv_dv;
    gy[m] = oy[m] * inv_dv;
    gz[m] = oz[m] * inv_dv;
    ow[m] = sq.weights[m];
  }

  parallel_for(nv, [&](std::size_t ivflat) {
    int rem = static_cast<int>(ivflat);
    int vk = 0;
    if constexpr (DIM == 3) {
      vk = rem % n;
      rem /= n;
    }
    const int vj = rem % n;
    const int vi = rem / n;
    const double vx = axis[static_cast<std::size_t>(vi)];
    const double vy = axis[static_cast<std::size_t>(vj)];
    const double vz = DIM == 3 ? axis[static_cast<std::size_t>(vk)] : 0.0;

    const double f_v = f[ivflat];
    const double g_v = QUADRATIC ? f_v : g[ivflat];

    double gain = 0.0;
    double loss = 0.0;

    std::size_t iuflat = 0;
    for (int ui = 0; ui < n; ++ui) {
      const double rx = axis[static_cast<std::size_t>(ui)] - vx;
      for (int uj = 0; uj < n; ++uj) {
        const double ry = axis[static_cast<std::size_t>(uj)] - vy;
        const int kmax = DIM == 3 ? n : 1;
        for (int uk = 0; uk < kmax; ++uk, ++iuflat) {
          const double rz = DIM == 3 ? axis[static_cast<std::size_t>(uk)] - vz : 0.0;

          double bfac;
          if (hard_sphere) {
            bfac = k.strength;
          } else {
            const double rel_norm = std::sqrt(rx * rx + ry * ry + (DIM == 3 ? rz * rz : 0.0));
            bfac = rel_norm > 0.0
                       ? (k.form == KernelForm::maxwell
                              ? k.strength / rel_norm
                              : k.strength * std::pow(rel_norm, k.lambda) / rel_norm)
                       : 0.0;
          }
          if (bfac == 0.0) continue;

          const double f_u = f[iuflat];
          const double g_u = QUADRATIC ? f_u : g[iuflat];

          // accumulate with the |proj| factor only; bfac scales both sums
          // once per pair
          double wsum_red = 0.0;
          double gain_red = 0.0;
          for (std::size_t m = 0; m < nw; ++m) {
            const double proj = rx * ox[m] + ry * oy[m] + (DIM == 3 ? rz * oz[m] : 0.0);
            const double w = ow[m] * std::abs(proj);
            wsum_red += w;
            if (w == 0.0) continue;
            if constexpr (DIM == 3) {
              const double sxg = proj * gx[m], syg = proj * gy[m], szg = proj * gz[m];
              const double f_up = interp3_grid(f, n, ui - sxg, uj - syg, uk - szg);
              const double f_vp = interp3_grid(f, n, vi + sxg, vj + syg, vk + szg);
              if constexpr (QUADRATIC) {
                gain_red += w * (f_up * f_vp);
              } else {
                const double g_up = interp3_grid(g, n, ui - sxg, uj - syg, uk - szg);
                const double g_vp = interp3_grid(g, n, vi + sxg, vj + syg, vk + szg);
                gain_red += w * (f_vp * g_up + f_up * g_vp);
              }
            } else {
              const double sxg = proj * gx[m], syg = proj * gy[m];
              const double f_up = interp2_grid(f, n, ui - sxg, uj - syg);
              const double f_vp = interp2_grid(f, n, vi + sxg, vj + syg);
              if constexpr (QUADRATIC) {
                gain_red += w * (f_up * f_vp);
              } else {
                const double g_up = interp2_grid(g, n, ui - sxg, uj - syg);
                const double g_vp = interp2_grid(g, n, vi + sxg, vj + syg);
                gain_red += w * (f_vp * g_up + f_up * g_vp);
              }
            }
          }
          gain += bfac * gain_red;
          if constexpr (QUADRATIC) {
            loss += (bfac * wsum_red) * (f_u * f_v);
          } else {
            loss += (bfac * wsum_red) * (f_u * g_v + f_v * g_u);
          }
        }
      }
    }
    gain_out[ivflat] = gain * scale;
    loss_out[ivflat] = loss * scale;
  });
}

void check_input(std::span<const double> f, const VelocityGrid& vg, const char* what) {
  if (f.size() != static_cast<std::size_t>(vg.num_nodes()))
    throw std::invalid_argument(std::string(what) + ": slice does not match the velocity grid");
  for (double v : f)
    if (!std::isfinite(v))
      throw std::invalid_argument(std::string(what) + ": non-finite input value");
}

CollisionResult finish(std::vector<double> gain, std::vector<double> loss) {
  CollisionResult r;
  r.total.resize(gain.size());
  for (std::size_t i = 0; i < gain.size(); ++i) r.total[i] = gain[i] - loss[i];
  r.gain = std::move(gain);
  r.loss = std::move(loss);
  return r;
}

}  // namespace

CollisionResult q_quadratic(std::span<const double> f, const KernelSpec& k,
                            const VelocityGrid& vg, const SphereQuadrature& sq) {
  check_input(f, vg, "q_quadratic");
  std::vector<double> gain(f.size()), loss(f.size());
  if (vg.dim == 3)
    collide_impl<3, true>(f.data(), nullptr, k, vg, sq, gain.data(), loss.data());
  else
    collide_impl<2, true>(f.data(), nullptr, k, vg, sq, gain.data(), loss.data());
  return finish(std::move(gain), std::move(loss));
}

CollisionResult q_bilinear(std::span<const double> f, std::span<const double> g,
                           const KernelSpec& k, const VelocityGrid& vg,
                           const SphereQuadrature& sq) {
  check_input(f, vg, "q_bilinear");
  check_input(g, vg, "q_bilinear");
  std::vector<double> gain(f.size()), loss(f.size());
  if (vg.dim == 3)
    collide_impl<3, false>(f.data(), g.data(), k, vg, sq, gain.data(), loss.data());
  else
    collide_impl<2, false>(f.data(), g.data(), k, vg, sq, gain.data(), loss.data());
  return finish(std::move(gain), std::move(loss));
}

Moments conservation_defect(const CollisionResult& r, const VelocityGrid& vg) {
  return compute_moments(r.total, vg);
}

}  // namespace kfix
