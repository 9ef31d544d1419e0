#include "kfix/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kfix/parallel.hpp"

namespace kfix {

namespace {

void validate_constants(const KernelSpec& k) {
  if (k.strength < 0.0) throw std::invalid_argument("kernel: strength must be >= 0");
  if (!(k.b1 > 0.0)) throw std::invalid_argument("kernel: b1 must be positive");
  if (!(k.b > 0.0)) throw std::invalid_argument("kernel: b must be positive");
  if (k.mu < 0.0) throw std::invalid_argument("kernel: mu must be >= 0");
}

}  // namespace

KernelSpec KernelSpec::hard_sphere(double strength, double b1, double b, double mu) {
  KernelSpec k{KernelForm::hard_sphere, strength, 0.0, b1, b, mu};
  validate_constants(k);
  return k;
}

KernelSpec KernelSpec::maxwell(double strength, double b1, double b, double mu) {
  KernelSpec k{KernelForm::maxwell, strength, 0.0, b1, b, mu};
  validate_constants(k);
  return k;
}

KernelSpec KernelSpec::variable_hard_sphere(double strength, double lambda, double b1, double b,
                                            double mu) {
  KernelSpec k{KernelForm::variable_hard_sphere, strength, lambda, b1, b, mu};
  validate_constants(k);
  return k;
}

double evaluate(const KernelSpec& k, const Vec3& omega, const Vec3& u, const Vec3& v) {
  if (std::abs(norm(omega) - 1.0) > 1e-12)
    throw std::invalid_argument("kernel evaluate: omega must be a unit vector");
  const Vec3 rel = sub(u, v);
  return detail::kernel_value(k, rel, dot(rel, omega));
}

BoundReport check_bounds(const KernelSpec& k, const SphereQuadrature& sq,
                         std::span<const double> speeds) {
  if (speeds.empty()) throw std::invalid_argument("check_bounds: speeds list is empty");
  for (double r : speeds)
    if (!(r > 0.0)) throw std::invalid_argument("check_bounds: speeds must be positive");

  BoundReport rep;
  rep.worst_b2_ratio = 0.0;
  rep.worst_b3_ratio = std::numeric_limits<double>::infinity();

  for (double r : speeds) {
    // Pointwise upper bound and the sphere integral at this relative speed.
    // B depends only on |rel| and the projection (condition B0), so the
    // relative velocity can be aligned with any fixed axis.
    const Vec3 rel{r, 0.0, 0.0};
    double integral = 0.0;
    for (std::size_t i = 0; i < sq.nodes.size(); ++i) {
      const double proj = dot(rel, sq.nodes[i]);
      const double bval = detail::kernel_value(k, rel, proj);
      integral += sq.weights[i] * bval;
      const double bound = k.b1 * std::abs(proj) / r * (1.0 + std::pow(r, k.mu));
      if (bound > 0.0) {
        rep.worst_b2_ratio = std::max(rep.worst_b2_ratio, bval / bound);
      } else if (bval > 0.0) {
        rep.worst_b2_ratio = std::numeric_limits<double>::infinity();
      }
      ++rep.sample_count;
    }
    const double lower = k.b * r / (1.0 + std::pow(r, k.mu));
    rep.worst_b3_ratio = std::min(rep.worst_b3_ratio, integral / lower);
  }

  rep.b2_satisfied = rep.worst_b2_ratio <= 1.0;
  rep.b3_satisfied = rep.worst_b3_ratio >= 1.0;
  return rep;
}

double hypothesis_integral(const KernelSpec& k, std::span<const double> h,
                           const VelocityGrid& vg, const SphereQuadrature& sq, const Vec3& v) {
  if (h.size() != static_cast<std::size_t>(vg.num_nodes()))
    throw std::invalid_argument("hypothesis_integral: slice does not match the velocity grid");
  const double dvn = vg.cell_volume();
  double acc = 0.0;
  for (std::size_t iu = 0; iu < h.size(); ++iu) {
    if (h[iu] == 0.0) continue;
    const Vec3 rel = sub(vg.node(static_cast<int>(iu)), v);
    double omega_sum = 0.0;
    for (std::size_t i = 0; i < sq.nodes.size(); ++i)
      omega_sum += sq.weights[i] * detail::kernel_value(k, rel, dot(rel, sq.nodes[i]));
    acc += std::abs(h[iu]) * omega_sum;
  }
  return acc * dvn;
}

HypothesisCertificate certify_theorem1_hypotheses(const KernelSpec& k,
                                                  const DistributionField& f2,
                                                  std::span<const DistributionField> g_list,
                                                  const VelocityGrid& vg,
                                                  const SphereQuadrature& sq) {
  std::vector<const DistributionField*> fields;
  fields.push_back(&f2);
  for (const auto& g : g_list) {
    if (!g.shape_matches(f2))
      throw std::invalid_argument("certify: fields must share grids");
    fields.push_back(&g);
  }

  const std::size_t nv = static_cast<std::size_t>(vg.num_nodes());
  const double half_dv = 0.5 * vg.spacing;

  // Amplification factor of the hypothesis bound per velocity node;
  // nodes too close to the origin are excluded (the bound's right side
  // vanishes there).
  std::vector<double> amp(nv, -1.0);
  int excluded = 0;
  for (std::size_t iv = 0; iv < nv; ++iv) {
    const double speed = norm(vg.node(static_cast<int>(iv)));
    if (speed < half_dv) {
      ++excluded;
      continue;
    }
    amp[iv] = k.b1 * (1.0 + std::pow(speed, k.mu)) / speed;
  }

  HypothesisCertificate cert;
  cert.excluded_nodes = excluded;

  for (const DistributionField* f : fields) {
    const std::size_t nt = f->num_times();
    const std::size_t nx = f->num_space();
    std::vector<double> sample_max(nt * nx, 0.0);
    parallel_for(nt * nx, [&](std::size_t s) {
      const std::size_t t = s / nx;
      const std::size_t x = s % nx;
      std::span<const double> h = f->slice(t).subspan(x * nv, nv);
      double worst = 0.0;
      for (std::size_t iv = 0; iv < nv; ++iv) {
        if (amp[iv] < 0.0) continue;
        const double val =
            hypothesis_integral(k, h, vg, sq, vg.node(static_cast<int>(iv))) * amp[iv];
        worst = std::max(worst, val);
      }
      sample_max[s] = worst;
    });
    for (double w : sample_max) cert.l_estimate = std::max(cert.l_estimate, w);
  }

  cert.satisfied = cert.l_estimate < 1.0;
  return cert;
}

}  // namespace kfix
