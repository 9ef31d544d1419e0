#include "kfix/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kfix/random_fields.hpp"

namespace kfix {

namespace {

double eval_raw(const BetaFunction& b, double t) {
  switch (b.form) {
    case BetaForm::log1p:
      return std::log1p(t) + b.offset;
    case BetaForm::scaled_log1p:
      return b.scale * std::log1p(t) + b.offset;
    case BetaForm::custom_rational:
      return b.scale * t / (1.0 + t / b.saturation) + b.offset;
  }
  return 0.0;
}

double prime_raw(const BetaFunction& b, double t) {
  switch (b.form) {
    case BetaForm::log1p:
      return 1.0 / (1.0 + t);
    case BetaForm::scaled_log1p:
      return b.scale / (1.0 + t);
    case BetaForm::custom_rational: {
      const double d = 1.0 + t / b.saturation;
      return b.scale / (d * d);
    }
  }
  return 0.0;
}

}  // namespace

const std::vector<double>& beta_bound_sweep() {
  static const std::vector<double> sweep = [] {
    std::vector<double> t{0.0};
    // 8 points per decade from 1e-8 up to 1e6.
    const int per_decade = 8;
    for (int k = 0; k <= 14 * per_decade; ++k)
      t.push_back(std::pow(10.0, -8.0 + static_cast<double>(k) / per_decade));
    return t;
  }();
  return sweep;
}

BetaFunction BetaFunction::log1p_form() { return BetaFunction{BetaForm::log1p, 1.0, 1.0, 1.0, 0.0}; }

BetaFunction BetaFunction::scaled_log1p(double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("beta: scale must be positive");
  return BetaFunction{BetaForm::scaled_log1p, scale, scale, 1.0, 0.0};
}

BetaFunction BetaFunction::custom_rational(double scale, double saturation) {
  if (!(scale > 0.0) || !(saturation > 0.0))
    throw std::invalid_argument("beta: scale and saturation must be positive");
  BetaFunction b{BetaForm::custom_rational, 0.0, scale, saturation, 0.0};
  // The Lipschitz-derivative constant is fixed from the certification
  // sweep itself, so the admissibility bound holds by construction.
  b.c = beta_bound_worst(b);
  return b;
}

BetaFunction BetaFunction::shifted(double delta) const {
  BetaFunction b = *this;
  b.offset += delta;
  return b;
}

double beta_eval(const BetaFunction& b, double t) {
  if (t < 0.0) throw std::domain_error("beta_eval: argument must be >= 0");
  return eval_raw(b, t);
}

double beta_prime(const BetaFunction& b, double t) {
  if (t < 0.0) throw std::domain_error("beta_prime: argument must be >= 0");
  return prime_raw(b, t);
}

double beta_bound_worst(const BetaFunction& b) {
  double worst = 0.0;
  for (double t : beta_bound_sweep())
    worst = std::max(worst, std::abs(prime_raw(b, t)) * (1.0 + t));
  return worst;
}

bool beta_bound_satisfied(const BetaFunction& b) { return beta_bound_worst(b) <= b.c; }

double beta_lipschitz_bound(const BetaFunction& b) { return prime_raw(b, 0.0); }

std::vector<double> beta_of_slice(const BetaFunction& b, std::span<const double> f,
                                  std::size_t* clipped) {
  std::vector<double> out(f.size());
  std::size_t clips = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double t = f[i];
    if (t < 0.0) {
      t = 0.0;
      ++clips;
    }
    out[i] = eval_raw(b, t);
  }
  if (clipped) *clipped += clips;
  return out;
}

std::vector<double> beta_prime_of_slice(const BetaFunction& b, std::span<const double> f,
                                        std::size_t* clipped) {
  std::vector<double> out(f.size());
  std::size_t clips = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double t = f[i];
    if (t < 0.0) {
      t = 0.0;
      ++clips;
    }
    out[i] = prime_raw(b, t);
  }
  if (clipped) *clipped += clips;
  return out;
}

RenormResidualReport renorm_residual(const DistributionField& f, const BetaFunction& b,
                                     const SolverConfig& cfg) {
  cfg.validate();
  if (f.num_times() < 2)
    throw std::invalid_argument("renorm_residual: needs at least two time nodes");

  RenormResidualReport rep;
  rep.beta_used = b;
  rep.dt = f.time_nodes[1] - f.time_nodes[0];
  rep.dx = cfg.sgrid.homogeneous() ? 0.0 : cfg.sgrid.spacing();
  rep.dv = cfg.vgrid.spacing;

  const std::size_t nt = f.num_times();
  const std::size_t nx = f.num_space();
  const std::size_t nv = f.num_vel();
  const double dt = rep.dt;

  // beta(f), beta'(f) and Q(f,f) per time node.
  std::vector<std::vector<double>> beta_f(nt), beta_p(nt), qf(nt);
  for (std::size_t m = 0; m < nt; ++m) {
    beta_f[m] = beta_of_slice(b, f.slice(m), &rep.clipped_count);
    beta_p[m] = beta_prime_of_slice(b, f.slice(m), nullptr);
    qf[m].resize(nx * nv);
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const auto q =
          q_quadratic(f.slice(m).subspan(ix * nv, nv), cfg.kernel, cfg.vgrid, cfg.squad);
      std::copy(q.total.begin(), q.total.end(),
                qf[m].begin() + static_cast<std::ptrdiff_t>(ix * nv));
    }
  }

  DistributionField defect(f.time_nodes, cfg.sgrid, cfg.vgrid);
  const int nsx = cfg.sgrid.nodes_per_axis;

  for (std::size_t m = 0; m < nt; ++m) {
    auto out = defect.slice(m);
    for (std::size_t i = 0; i < out.size(); ++i) {
      // d/dt by second-order differences, one-sided at the ends.
      double ddt;
      if (nt == 2) {
        ddt = (beta_f[1][i] - beta_f[0][i]) / dt;
      } else if (m == 0) {
        ddt = (-3.0 * beta_f[0][i] + 4.0 * beta_f[1][i] - beta_f[2][i]) / (2.0 * dt);
      } else if (m == nt - 1) {
        ddt = (3.0 * beta_f[m][i] - 4.0 * beta_f[m - 1][i] + beta_f[m - 2][i]) / (2.0 * dt);
      } else {
        ddt = (beta_f[m + 1][i] - beta_f[m - 1][i]) / (2.0 * dt);
      }
      out[i] = ddt - beta_p[m][i] * qf[m][i];
    }

    if (!cfg.sgrid.homogeneous()) {
      // v . grad_x beta(f) by centered periodic differences.
      const double inv_2dx = 1.0 / (2.0 * cfg.sgrid.spacing());
      for (std::size_t ix = 0; ix < nx; ++ix) {
        // Decode the spatial multi-index once per node.
        int idx[3] = {0, 0, 0};
        int remx = static_cast<int>(ix);
        for (int a = cfg.sgrid.dim - 1; a >= 0; --a) {
          idx[a] = remx % nsx;
          remx /= nsx;
        }
        for (std::size_t iv = 0; iv < nv; ++iv) {
          const Vec3 vel = cfg.vgrid.node(static_cast<int>(iv));
          double adv = 0.0;
          for (int a = 0; a < cfg.sgrid.dim; ++a) {
            int stride = 1;
            for (int r = a + 1; r < cfg.sgrid.dim; ++r) stride *= nsx;
            const int up = idx[a] + 1 == nsx ? static_cast<int>(ix) - (nsx - 1) * stride
                                             : static_cast<int>(ix) + stride;
            const int dn = idx[a] == 0 ? static_cast<int>(ix) + (nsx - 1) * stride
                                       : static_cast<int>(ix) - stride;
            adv += vel[static_cast<std::size_t>(a)] *
                   (beta_f[m][static_cast<std::size_t>(up) * nv + iv] -
                    beta_f[m][static_cast<std::size_t>(dn) * nv + iv]) *
                   inv_2dx;
          }
          out[ix * nv + iv] += adv;
        }
      }
    }
  }

  rep.residual_l1 = l1_norm(defect);
  return rep;
}

Theorem2Conditions theorem2_condition_check(const BetaFunction& b1, const BetaFunction& b2,
                                            const DistributionField& g, const SolverConfig& cfg) {
  cfg.validate();
  Theorem2Conditions cond;

  const double root_c = std::sqrt(std::max(b1.c, b2.c));
  cond.ordering_ok = true;
  for (double t : beta_bound_sweep()) {
    if (!(eval_raw(b1, t) >= eval_raw(b2, t) + root_c)) {
      cond.ordering_ok = false;
      break;
    }
  }

  // int_0^T Q^#(g,g) dt by trapezoid, then the (x,v) L1 norm.
  std::vector<double> accum(g.slice_size(), 0.0);
  std::vector<double> prev;
  for (std::size_t m = 0; m < g.num_times(); ++m) {
    std::vector<double> qs = q_sharp(g, m, cfg.kernel, cfg.vgrid, cfg.squad);
    if (m > 0) {
      const double dt = g.time_nodes[m] - g.time_nodes[m - 1];
      for (std::size_t i = 0; i < accum.size(); ++i) accum[i] += 0.5 * dt * (prev[i] + qs[i]);
    }
    prev = std::move(qs);
  }
  cond.q_integral = slice_l1(accum, cfg.sgrid, cfg.vgrid);
  cond.q_ok = cond.q_integral < 1.0;
  return cond;
}

std::vector<double> renorm_f_map(const DistributionField& g, const DistributionField& f2,
                                 const BetaFunction& b, const SolverConfig& cfg) {
  cfg.validate();
  if (!g.shape_matches(f2)) throw std::invalid_argument("renorm_f_map: fields must share grids");
  if (!(field_min(f2) >= 0.0))
    throw std::invalid_argument("renorm_f_map: f2 must be nonnegative");

  const DistributionField sum = field_sum(f2, g);
  const std::size_t n = g.slice_size();

  // beta^# difference at t = 0 (the shift is the identity there).
  const std::vector<double> beta_sum0 = beta_of_slice(b, sum.slice(0), nullptr);
  const std::vector<double> beta_f20 = beta_of_slice(b, f2.slice(0), nullptr);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = beta_sum0[i] - beta_f20[i];

  // trapezoid of beta'^# Q^# differences over [0, T].
  std::vector<double> prev;
  for (std::size_t m = 0; m < g.num_times(); ++m) {
    const double t = g.time_nodes[m];
    const std::vector<double> bp_sum = characteristic_shift(
        beta_prime_of_slice(b, sum.slice(m), nullptr), t, cfg.sgrid, cfg.vgrid, +1);
    const std::vector<double> bp_f2 = characteristic_shift(
        beta_prime_of_slice(b, f2.slice(m), nullptr), t, cfg.sgrid, cfg.vgrid, +1);
    const std::vector<double> q_sum = q_sharp(sum, m, cfg.kernel, cfg.vgrid, cfg.squad);
    const std::vector<double> q_f2 = q_sharp(f2, m, cfg.kernel, cfg.vgrid, cfg.squad);

    // Grouped as a product-rule split so that g = 0 yields an exact zero
    // even when the compiler contracts multiplies into FMAs.
    std::vector<double> integrand(n);
    for (std::size_t i = 0; i < n; ++i)
      integrand[i] = (bp_sum[i] - bp_f2[i]) * q_sum[i] + bp_f2[i] * (q_sum[i] - q_f2[i]);

    if (m > 0) {
      const double dt = g.time_nodes[m] - g.time_nodes[m - 1];
      for (std::size_t i = 0; i < n; ++i) out[i] += 0.5 * dt * (prev[i] + integrand[i]);
    }
    prev = std::move(integrand);
  }
  return out;
}

RenormUniquenessReport renorm_uniqueness_experiment(std::span<const double> f0,
                                                    const SolverConfig& cfg,
                                                    const BetaFunction& b, std::uint64_t seed,
                                                    double perturbation_scale) {
  cfg.validate();
  RenormUniquenessReport rep;
  rep.threshold = 10.0 * cfg.residual_tol * std::max(1.0, beta_lipschitz_bound(b));

  std::mt19937_64 rng(seed);
  DistributionField start_a = constant_extension(f0, cfg);
  DistributionField start_b = field_sum(
      start_a, smooth_field(start_a.time_nodes, cfg.sgrid, cfg.vgrid, rng, perturbation_scale,
                            /*zero_initial_slice=*/true));

  auto [fa, ra] = solve_from(start_a, f0, cfg);
  auto [fb, rb] = solve_from(start_b, f0, cfg);
  rep.iterations = {ra.iters_used, rb.iters_used};
  rep.conclusive = ra.converged && rb.converged;

  rep.raw_distance = l1_norm(field_difference(fa, fb));

  DistributionField beta_a(fa.time_nodes, cfg.sgrid, cfg.vgrid);
  DistributionField beta_b(fb.time_nodes, cfg.sgrid, cfg.vgrid);
  for (std::size_t m = 0; m < fa.num_times(); ++m) {
    const std::vector<double> va = beta_of_slice(b, fa.slice(m), nullptr);
    const std::vector<double> vb = beta_of_slice(b, fb.slice(m), nullptr);
    std::copy(va.begin(), va.end(), beta_a.slice(m).begin());
    std::copy(vb.begin(), vb.end(), beta_b.slice(m).begin());
  }
  rep.beta_distance = l1_norm(field_difference(beta_a, beta_b));

  rep.passed = rep.conclusive && rep.beta_distance <= rep.threshold;
  return rep;
}

}  // namespace kfix
