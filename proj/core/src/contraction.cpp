#include "kfix/contraction.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "kfix/random_fields.hpp"

namespace kfix {

namespace {

// Cumulative trapezoid of per-time-node slices produced by `make_slice`.
DistributionField accumulate_trapezoid(const std::vector<double>& time_nodes,
                                       const SpatialGrid& sg, const VelocityGrid& vg,
                                       const std::function<std::vector<double>(std::size_t)>&
                                           make_slice) {
  DistributionField out(time_nodes, sg, vg);
  const std::size_t nt = time_nodes.size();
  std::vector<double> accum(out.slice_size(), 0.0);
  std::vector<double> prev;
  for (std::size_t m = 0; m < nt; ++m) {
    std::vector<double> cur = make_slice(m);
    if (m > 0) {
      const double dt = time_nodes[m] - time_nodes[m - 1];
      for (std::size_t i = 0; i < accum.size(); ++i)
        accum[i] += 0.5 * dt * (prev[i] + cur[i]);
    }
    std::copy(accum.begin(), accum.end(), out.slice(m).begin());
    prev = std::move(cur);
  }
  return out;
}

}  // namespace

DistributionField f_map(const DistributionField& g, const DistributionField& f2,
                        const SolverConfig& cfg) {
  cfg.validate();
  if (!g.shape_matches(f2)) throw std::invalid_argument("f_map: fields must share grids");
  if (g.time_nodes != cfg.time_nodes())
    throw std::invalid_argument("f_map: fields are not on the configured time grid");

  const DistributionField sum = field_sum(f2, g);
  return accumulate_trapezoid(g.time_nodes, cfg.sgrid, cfg.vgrid, [&](std::size_t m) {
    std::vector<double> a = q_sharp(sum, m, cfg.kernel, cfg.vgrid, cfg.squad);
    const std::vector<double> b = q_sharp(f2, m, cfg.kernel, cfg.vgrid, cfg.squad);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
  });
}

double bilinear_difference_identity_check(const DistributionField& g1,
                                          const DistributionField& g2,
                                          const DistributionField& f2, const SolverConfig& cfg) {
  cfg.validate();
  if (!g1.shape_matches(f2) || !g2.shape_matches(f2))
    throw std::invalid_argument("identity check: fields must share grids");

  const DistributionField a = field_sum(f2, g1);
  const DistributionField b = field_sum(f2, g2);
  const DistributionField dg = field_difference(g1, g2);

  DistributionField defect(f2.time_nodes, cfg.sgrid, cfg.vgrid);
  for (std::size_t m = 0; m < f2.num_times(); ++m) {
    const std::vector<double> lhs_a = q_sharp(a, m, cfg.kernel, cfg.vgrid, cfg.squad);
    const std::vector<double> lhs_b = q_sharp(b, m, cfg.kernel, cfg.vgrid, cfg.squad);
    const std::vector<double> cross =
        q_sharp_bilinear(f2, dg, m, cfg.kernel, cfg.vgrid, cfg.squad);
    const std::vector<double> qg1 = q_sharp(g1, m, cfg.kernel, cfg.vgrid, cfg.squad);
    const std::vector<double> qg2 = q_sharp(g2, m, cfg.kernel, cfg.vgrid, cfg.squad);
    auto out = defect.slice(m);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double lhs = lhs_a[i] - lhs_b[i];
      const double rhs = 2.0 * cross[i] + qg1[i] - qg2[i];
      out[i] = lhs - rhs;
    }
  }
  return l1_norm(defect);
}

ContractionReport empirical_contraction(
    const std::vector<std::pair<DistributionField, DistributionField>>& pairs,
    const DistributionField& f2, const SolverConfig& cfg, double slack) {
  cfg.validate();
  if (pairs.empty()) throw std::invalid_argument("empirical_contraction: no pairs given");

  ContractionReport rep;
  rep.slack = slack;

  std::vector<DistributionField> members;
  members.reserve(2 * pairs.size());
  for (const auto& [g1, g2] : pairs) {
    members.push_back(g1);
    members.push_back(g2);
  }
  const HypothesisCertificate cert =
      certify_theorem1_hypotheses(cfg.kernel, f2, members, cfg.vgrid, cfg.squad);
  rep.hypothesis_l = cert.l_estimate;
  rep.excluded_nodes = cert.excluded_nodes;

  for (const auto& [g1, g2] : pairs) {
    const double denom = l1_norm(field_difference(g1, g2));
    if (denom < 1e-14) {
      ++rep.pairs_skipped;
      continue;
    }
    const DistributionField fg1 = f_map(g1, f2, cfg);
    const DistributionField fg2 = f_map(g2, f2, cfg);
    rep.empirical_ratios.push_back(l1_norm(field_difference(fg1, fg2)) / denom);
    ++rep.pairs_tested;
  }
  if (rep.pairs_tested == 0)
    throw std::invalid_argument("empirical_contraction: every pair was degenerate");

  rep.max_ratio = *std::max_element(rep.empirical_ratios.begin(), rep.empirical_ratios.end());
  rep.passed = cert.satisfied && rep.max_ratio <= rep.hypothesis_l + slack;
  return rep;
}

UniquenessReport uniqueness_experiment(std::span<const double> f0, const SolverConfig& cfg,
                                       int n_perturbations, std::uint64_t seed,
                                       double perturbation_scale) {
  cfg.validate();
  if (n_perturbations < 1)
    throw std::invalid_argument("uniqueness_experiment: needs at least one run");

  UniquenessReport rep;
  rep.runs = n_perturbations;
  rep.threshold = 10.0 * cfg.residual_tol;

  std::mt19937_64 rng(seed);
  std::vector<DistributionField> fixed_points;
  bool all_converged = true;
  for (int i = 0; i < n_perturbations; ++i) {
    DistributionField start = constant_extension(f0, cfg);
    if (i > 0) {
      const DistributionField bump = smooth_field(start.time_nodes, cfg.sgrid, cfg.vgrid, rng,
                                                  perturbation_scale, /*zero_initial_slice=*/true);
      start = field_sum(start, bump);
    }
    auto [fp, it] = solve_from(start, f0, cfg);
    rep.iterations.push_back(it.iters_used);
    rep.converged.push_back(it.converged);
    all_converged = all_converged && it.converged;
    fixed_points.push_back(std::move(fp));
  }
  rep.conclusive = all_converged;

  for (std::size_t i = 0; i < fixed_points.size(); ++i)
    for (std::size_t j = i + 1; j < fixed_points.size(); ++j)
      rep.pairwise_distances.push_back(
          l1_norm(field_difference(fixed_points[i], fixed_points[j])));
  for (double d : rep.pairwise_distances) rep.max_distance = std::max(rep.max_distance, d);

  rep.passed = rep.conclusive && rep.max_distance <= rep.threshold;
  return rep;
}

}  // namespace kfix
