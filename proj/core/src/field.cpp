#include "kfix/field.hpp"

#include <cmath>
#include <stdexcept>

namespace kfix {

DistributionField::DistributionField(std::vector<double> times, SpatialGrid sg, VelocityGrid vg)
    : time_nodes(std::move(times)), sgrid(sg), vgrid(vg) {
  if (time_nodes.empty()) throw std::invalid_argument("field: needs at least one time node");
  if (sgrid.dim != vgrid.dim)
    throw std::invalid_argument("field: spatial and velocity dims differ");
  values.assign(num_times() * slice_size(), 0.0);
}

double& DistributionField::at(std::size_t t, std::size_t x, std::size_t v) {
  return values[(t * num_space() + x) * num_vel() + v];
}

double DistributionField::at(std::size_t t, std::size_t x, std::size_t v) const {
  return values[(t * num_space() + x) * num_vel() + v];
}

std::span<double> DistributionField::slice(std::size_t t) {
  return {values.data() + t * slice_size(), slice_size()};
}

std::span<const double> DistributionField::slice(std::size_t t) const {
  return {values.data() + t * slice_size(), slice_size()};
}

bool DistributionField::shape_matches(const DistributionField& other) const {
  return time_nodes == other.time_nodes && sgrid.dim == other.sgrid.dim &&
         sgrid.nodes_per_axis == other.sgrid.nodes_per_axis &&
         sgrid.period == other.sgrid.period && vgrid.dim == other.vgrid.dim &&
         vgrid.nodes_per_axis == other.vgrid.nodes_per_axis &&
         vgrid.extent == other.vgrid.extent;
}

bool DistributionField::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

std::vector<double> uniform_time_nodes(double horizon, int steps) {
  if (!(horizon > 0.0)) throw std::invalid_argument("time grid: horizon must be positive");
  if (steps < 1) throw std::invalid_argument("time grid: needs at least one step");
  std::vector<double> t(static_cast<std::size_t>(steps) + 1);
  for (int m = 0; m <= steps; ++m)
    t[static_cast<std::size_t>(m)] = horizon * static_cast<double>(m) / static_cast<double>(steps);
  return t;
}

double l1_norm(const DistributionField& f) {
  const double dt = f.num_times() > 1 ? f.time_nodes[1] - f.time_nodes[0] : 1.0;
  const double w = dt * f.sgrid.cell_volume() * f.vgrid.cell_volume();
  double s = 0.0;
  for (double v : f.values) s += std::abs(v);
  return s * w;
}

double slice_l1(std::span<const double> slice, const SpatialGrid& sg, const VelocityGrid& vg) {
  double s = 0.0;
  for (double v : slice) s += std::abs(v);
  return s * sg.cell_volume() * vg.cell_volume();
}

double velocity_l1(std::span<const double> slice, const VelocityGrid& vg) {
  double s = 0.0;
  for (double v : slice) s += std::abs(v);
  return s * vg.cell_volume();
}

Moments compute_moments(std::span<const double> f, const VelocityGrid& vg) {
  if (f.size() != static_cast<std::size_t>(vg.num_nodes()))
    throw std::invalid_argument("compute_moments: slice does not match the velocity grid");
  Moments m;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec3 v = vg.node(static_cast<int>(i));
    m.mass += f[i];
    m.momentum[0] += v[0] * f[i];
    m.momentum[1] += v[1] * f[i];
    m.momentum[2] += v[2] * f[i];
    m.energy += norm2(v) * f[i];
  }
  const double w = vg.cell_volume();
  m.mass *= w;
  m.momentum = scaled(m.momentum, w);
  m.energy *= w;
  return m;
}

double interp_velocity(std::span<const double> f, const VelocityGrid& vg, const Vec3& p) {
  const int n = vg.nodes_per_axis;
  const double inv_dv = 1.0 / vg.spacing;

  int base[3] = {0, 0, 0};
  double w1[3] = {0.0, 0.0, 0.0};
  for (int a = 0; a < vg.dim; ++a) {
    const double c = (p[static_cast<std::size_t>(a)] + vg.extent) * inv_dv;
    const double fl = std::floor(c);
    if (fl < -1.0 || fl > static_cast<double>(n - 1)) return 0.0;  // beyond the ghost ring
    base[a] = static_cast<int>(fl);
    w1[a] = c - fl;
  }

  double acc = 0.0;
  const int corners = 1 << vg.dim;
  for (int corner = 0; corner < corners; ++corner) {
    double w = 1.0;
    std::size_t idx = 0;
    bool inside = true;
    for (int a = 0; a < vg.dim; ++a) {
      const int off = (corner >> a) & 1;
      const int i = base[a] + off;
      if (i < 0 || i >= n) {
        inside = false;
        break;
      }
      w *= off ? w1[a] : 1.0 - w1[a];
      idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
    }
    if (inside) acc += w * f[idx];
  }
  return acc;
}

double interp_space_periodic(std::span<const double> h, const SpatialGrid& sg,
                             std::size_t num_vel, std::size_t v_flat, const Vec3& x_query) {
  if (sg.homogeneous()) return h[v_flat];
  const int n = sg.nodes_per_axis;
  const double dx = sg.spacing();

  int i0[3] = {0, 0, 0};
  double w1[3] = {0.0, 0.0, 0.0};
  for (int a = 0; a < sg.dim; ++a) {
    double c = std::fmod(x_query[static_cast<std::size_t>(a)], sg.period);
    if (c < 0.0) c += sg.period;
    const double g = c / dx;
    double fl = std::floor(g);
    double t = g - fl;
    int i = static_cast<int>(fl) % n;
    if (i < 0) i += n;
    i0[a] = i;
    w1[a] = t;
  }

  double acc = 0.0;
  const int corners = 1 << sg.dim;
  for (int corner = 0; corner < corners; ++corner) {
    double w = 1.0;
    std::size_t idx = 0;
    for (int a = 0; a < sg.dim; ++a) {
      const int off = (corner >> a) & 1;
      int i = i0[a] + off;
      if (i >= n) i -= n;
      w *= off ? w1[a] : 1.0 - w1[a];
      idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
    }
    acc += w * h[idx * num_vel + v_flat];
  }
  return acc;
}

namespace {
DistributionField combine(const DistributionField& a, const DistributionField& b, double sb) {
  if (!a.shape_matches(b)) throw std::invalid_argument("field combine: shapes differ");
  DistributionField r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] += sb * b.values[i];
  return r;
}
}  // namespace

DistributionField field_difference(const DistributionField& a, const DistributionField& b) {
  return combine(a, b, -1.0);
}

DistributionField field_sum(const DistributionField& a, const DistributionField& b) {
  return combine(a, b, 1.0);
}

DistributionField field_scaled(const DistributionField& a, double s) {
  DistributionField r = a;
  for (double& v : r.values) v *= s;
  return r;
}

double field_min(const DistributionField& a) {
  double m = a.values.empty() ? 0.0 : a.values[0];
  for (double v : a.values)
    if (v < m) m = v;
  return m;
}

}  // namespace kfix
