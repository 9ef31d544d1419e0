// Acceptance suite: one pass/fail line per criterion.
//
//   kfix_acceptance                  run all criteria
//   kfix_acceptance --criterion N    run criterion N only
//
// Exit code 0 iff every executed criterion passed.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "kfix/collision.hpp"
#include "kfix/config.hpp"
#include "kfix/contraction.hpp"
#include "kfix/random_fields.hpp"
#include "kfix/renorm.hpp"
#include "kfix/scenarios.hpp"
#include "kfix/snapshot.hpp"
#include "oracles.hpp"

using namespace kfix;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared fixtures

// The certified small-data regime used by criteria 5-7 and 9:
// homogeneous 9^3 velocity grid on [-4,4]^3, weak hard-sphere kernel,
// small Maxwellian initial data, T = 0.5.
SolverConfig certified_config() {
  SolverConfig cfg;
  cfg.horizon = 0.5;
  cfg.time_steps = 8;
  cfg.max_picard_iters = 40;
  cfg.residual_tol = 1e-10;
  cfg.vgrid = build_velocity_grid(3, 4.0, 9);
  cfg.sgrid = build_spatial_grid(3, 1.0, 1);
  cfg.squad = build_sphere_quadrature(3, 4);
  cfg.kernel = KernelSpec::hard_sphere(0.02, 1.0, 2.0 * std::numbers::pi * 0.02, 1.0);
  return cfg;
}

std::vector<double> maxwellian_f0(const SolverConfig& cfg, double amplitude = 0.05) {
  std::vector<double> f0(cfg.sgrid.num_nodes() * static_cast<std::size_t>(cfg.vgrid.num_nodes()));
  for (std::size_t i = 0; i < f0.size(); ++i)
    f0[i] = amplitude * std::exp(-norm2(cfg.vgrid.node(static_cast<int>(i))));
  return f0;
}

// Fixed smooth, slightly asymmetric profile for the refinement studies;
// the same continuum function is sampled at every resolution.
double refinement_profile(const Vec3& v) {
  double s = 1.0;
  s += 0.35 * std::sin(1.3 * v[0] + 0.4);
  s += 0.25 * std::sin(0.9 * v[1] - 1.1) * std::sin(0.7 * v[2] + 0.3);
  s += 0.15 * std::sin(0.5 * v[0] + 0.8 * v[1] - 0.6 * v[2]);
  return s * std::exp(-norm2(v) / 1.5);
}

std::vector<double> sample_profile(const VelocityGrid& vg, double (*profile)(const Vec3&)) {
  std::vector<double> f(static_cast<std::size_t>(vg.num_nodes()));
  for (int i = 0; i < vg.num_nodes(); ++i) f[static_cast<std::size_t>(i)] = profile(vg.node(i));
  return f;
}

double gaussian_profile_helper(const Vec3& v) { return std::exp(-norm2(v)); }

// ---------------------------------------------------------------------------
// Criterion 1: oracle equivalence of the five quadrature operations on
// every velocity grid of size <= 7^3 with sphere order <= 6.

Outcome criterion1() {
  const double tol = 1e-10;
  double worst = 0.0;
  std::string worst_what = "none";
  int combos = 0;

  auto track = [&](double err, const std::string& what) {
    if (err > worst) {
      worst = err;
      worst_what = what;
    }
  };

  for (int dim : {2, 3}) {
    for (int nodes : {5, 7}) {
      for (int order : {4, 5, 6}) {
        ++combos;
        const VelocityGrid vg = build_velocity_grid(dim, 2.0, nodes);
        const SpatialGrid sg = build_spatial_grid(dim, 1.0, 1);
        const SphereQuadrature sq = build_sphere_quadrature(dim, order);
        const KernelSpec k = KernelSpec::hard_sphere(0.5, 1.0, 1.0, 1.0);
        const std::string tag =
            std::to_string(dim) + "d/" + std::to_string(nodes) + "/" + std::to_string(order);

        std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(combos));
        const std::size_t n = static_cast<std::size_t>(vg.num_nodes());
        std::vector<double> f(n), g(n);
        for (double& x : f) x = next_uniform(rng);
        for (double& x : g) x = next_uniform(rng);

        track(oracle::rel_l1(q_quadratic(f, k, vg, sq).total, oracle::q_quadratic(f, k, vg, sq)),
              "q_quadratic " + tag);
        track(oracle::rel_l1(q_bilinear(f, g, k, vg, sq).total, oracle::q_bilinear(f, g, k, vg, sq)),
              "q_bilinear " + tag);

        for (int iv = 0; iv < vg.num_nodes(); iv += 5) {
          const Vec3 v = vg.node(iv);
          const double want = oracle::hypothesis_integral(k, f, vg, sq, v);
          const double got = hypothesis_integral(k, f, vg, sq, v);
          track(std::abs(got - want) / std::max(want, 1e-300), "hypothesis_integral " + tag);
        }

        // time-dependent maps on the same grid, homogeneous, M = 2
        SolverConfig cfg;
        cfg.horizon = 0.3;
        cfg.time_steps = 2;
        cfg.vgrid = vg;
        cfg.sgrid = sg;
        cfg.squad = sq;
        cfg.kernel = k;

        DistributionField f2 = constant_extension(maxwellian_f0(cfg, 0.4), cfg);
        const DistributionField gp =
            smooth_field(cfg.time_nodes(), sg, vg, rng, 0.05);

        const DistributionField fm = f_map(gp, f2, cfg);
        const DistributionField fm_want = oracle::f_map(gp, f2, cfg);
        track(oracle::rel_l1(fm.values, fm_want.values), "f_map " + tag);

        const BetaFunction beta = BetaFunction::log1p_form();
        track(oracle::rel_l1(renorm_f_map(gp, f2, beta, cfg),
                             oracle::renorm_f_map(gp, f2, beta, cfg)),
              "renorm_f_map " + tag);
      }
    }
  }

  // spot checks of the other kernel forms
  {
    const VelocityGrid vg = build_velocity_grid(3, 2.0, 5);
    const SphereQuadrature sq = build_sphere_quadrature(3, 4);
    std::mt19937_64 rng(77);
    std::vector<double> f(static_cast<std::size_t>(vg.num_nodes()));
    for (double& x : f) x = next_uniform(rng);
    for (const KernelSpec& k : {KernelSpec::maxwell(0.8, 1.0, 1.0, 0.0),
                                KernelSpec::variable_hard_sphere(0.6, 0.5, 1.0, 1.0, 0.0)})
      track(oracle::rel_l1(q_quadratic(f, k, vg, sq).total, oracle::q_quadratic(f, k, vg, sq)),
            "q_quadratic non-hard-sphere");
  }

  Outcome out;
  out.passed = worst <= tol;
  out.detail = std::to_string(combos) + " grid/order combos, worst rel err " + num(worst) +
               " (" + worst_what + "), tol 1e-10";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 2: conservation defects of q_quadratic shrink by >= 2x per
// nodes_per_axis doubling across 9^3 -> 17^3 -> 33^3.

Outcome criterion2() {
  const KernelSpec k = KernelSpec::hard_sphere(1.0, 1.0, 1.0, 0.0);
  const SphereQuadrature sq = build_sphere_quadrature(3, 4);

  double mass[3], mom[3], energy[3];
  const int resolutions[3] = {9, 17, 33};
  for (int r = 0; r < 3; ++r) {
    const VelocityGrid vg = build_velocity_grid(3, 4.0, resolutions[r]);
    const std::vector<double> f = sample_profile(vg, refinement_profile);
    const Moments d = conservation_defect(q_quadratic(f, k, vg, sq), vg);
    mass[r] = std::abs(d.mass);
    mom[r] = norm(d.momentum);
    energy[r] = std::abs(d.energy);
  }

  bool ok = true;
  for (int r = 0; r + 1 < 3; ++r) {
    ok = ok && mass[r] >= 2.0 * mass[r + 1];
    ok = ok && mom[r] >= 2.0 * mom[r + 1];
    ok = ok && energy[r] >= 2.0 * energy[r + 1];
  }

  Outcome out;
  out.passed = ok;
  out.detail = "ratios per doubling: mass " + num(mass[0] / mass[1]) + "/" +
               num(mass[1] / mass[2]) + ", momentum " + num(mom[0] / mom[1]) + "/" +
               num(mom[1] / mom[2]) + ", energy " + num(energy[0] / energy[1]) + "/" +
               num(energy[1] / energy[2]) + " (need >= 2)";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 3: ||Q(M,M)||_1 / ||M||_1 for the Maxwellian halves (at least)
// per resolution doubling; the continuum value is 0.

Outcome criterion3() {
  const KernelSpec k = KernelSpec::hard_sphere(1.0, 1.0, 1.0, 0.0);
  const SphereQuadrature sq = build_sphere_quadrature(3, 4);

  double rel[3];
  const int resolutions[3] = {9, 17, 33};
  for (int r = 0; r < 3; ++r) {
    const VelocityGrid vg = build_velocity_grid(3, 4.0, resolutions[r]);
    const std::vector<double> m = sample_profile(vg, gaussian_profile_helper);
    const CollisionResult q = q_quadratic(m, k, vg, sq);
    rel[r] = velocity_l1(q.total, vg) / velocity_l1(m, vg);
  }

  Outcome out;
  out.passed = rel[0] >= 2.0 * rel[1] && rel[1] >= 2.0 * rel[2];
  out.detail = "normalized ||Q(M,M)||: " + num(rel[0]) + " -> " + num(rel[1]) + " -> " +
               num(rel[2]) + ", ratios " + num(rel[0] / rel[1]) + "/" + num(rel[1] / rel[2]) +
               " (need >= 2)";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 4: the eight-term regrouping identity, 100 random instances,
// scaled bound 1e-11 (||f2||+||g1||+||g2||)^2 -- exact pass/fail.

Outcome criterion4() {
  SolverConfig cfg;
  cfg.horizon = 0.4;
  cfg.time_steps = 2;
  cfg.vgrid = build_velocity_grid(3, 4.0, 5);
  cfg.sgrid = build_spatial_grid(3, 1.0, 1);
  cfg.squad = build_sphere_quadrature(3, 4);
  cfg.kernel = KernelSpec::hard_sphere(0.5, 1.0, 1.0, 1.0);

  std::mt19937_64 rng(4242);
  double worst_margin = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const double a2 = 0.05 + 0.4 * next_uniform(rng);
    const DistributionField f2 = constant_extension(maxwellian_f0(cfg, a2), cfg);
    const DistributionField g1 =
        smooth_field(cfg.time_nodes(), cfg.sgrid, cfg.vgrid, rng, 0.02 + 0.2 * next_uniform(rng));
    const DistributionField g2 =
        smooth_field(cfg.time_nodes(), cfg.sgrid, cfg.vgrid, rng, 0.02 + 0.2 * next_uniform(rng));

    const double scale = l1_norm(f2) + l1_norm(g1) + l1_norm(g2);
    const double bound = 1e-11 * scale * scale;
    const double got = bilinear_difference_identity_check(g1, g2, f2, cfg);
    ok = ok && got <= bound;
    worst_margin = std::max(worst_margin, got / bound);
  }

  Outcome out;
  out.passed = ok;
  out.detail = "100 instances, worst defect/bound = " + num(worst_margin);
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 5: empirical contraction ratios <= 0.65 over >= 20 pairs with
// the certified L <= 0.5, homogeneous 9^3, T = 0.5.

Outcome criterion5() {
  const SolverConfig cfg = certified_config();
  const std::vector<double> f0 = maxwellian_f0(cfg);

  auto [f2, solve_rep] = solve(f0, cfg);
  if (!solve_rep.converged) return {false, "reference solve did not converge"};

  std::mt19937_64 rng(55);
  std::vector<std::pair<DistributionField, DistributionField>> pairs;
  for (int i = 0; i < 20; ++i) {
    DistributionField g1 = smooth_field(f2.time_nodes, cfg.sgrid, cfg.vgrid, rng, 0.01);
    DistributionField g2 = smooth_field(f2.time_nodes, cfg.sgrid, cfg.vgrid, rng, 0.01);
    pairs.emplace_back(std::move(g1), std::move(g2));
  }

  const ContractionReport rep = empirical_contraction(pairs, f2, cfg, 0.15);

  Outcome out;
  out.passed = rep.hypothesis_l <= 0.5 && rep.pairs_tested >= 20 && rep.max_ratio <= 0.65;
  out.detail = "certified L = " + num(rep.hypothesis_l) + " (<= 0.5), max ratio = " +
               num(rep.max_ratio) + " over " + std::to_string(rep.pairs_tested) +
               " pairs (<= 0.65)";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 6: three Picard runs from distinct first iterates converge to
// residual <= 1e-10 with pairwise fixed-point distances <= 1e-9.

Outcome criterion6() {
  const SolverConfig cfg = certified_config();
  const std::vector<double> f0 = maxwellian_f0(cfg);

  const UniquenessReport rep = uniqueness_experiment(f0, cfg, 3, 606, 0.01);

  Outcome out;
  out.passed = rep.conclusive && rep.max_distance <= 1e-9;
  out.detail = std::string(rep.conclusive ? "all 3 runs converged" : "non-convergence") +
               ", max pairwise distance = " + num(rep.max_distance) + " (<= 1e-9)";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 7: geometric decay, residual_{k+1}/residual_k <= 0.65 for all
// k >= 2 in the certified regime.

Outcome criterion7() {
  const SolverConfig cfg = certified_config();
  const std::vector<double> f0 = maxwellian_f0(cfg);

  const auto [f, rep] = solve(f0, cfg);
  if (!rep.converged) return {false, "solve did not converge"};

  bool ok = rep.contraction_ratios.size() >= 2;
  double worst = 0.0;
  // ratios[0] compares the first two residuals (k = 1); the criterion
  // starts at k = 2.
  for (std::size_t i = 1; i < rep.contraction_ratios.size(); ++i) {
    worst = std::max(worst, rep.contraction_ratios[i]);
    ok = ok && rep.contraction_ratios[i] <= 0.65;
  }

  Outcome out;
  out.passed = ok;
  out.detail = std::to_string(rep.iters_used) + " iterations, worst ratio for k >= 2 = " +
               num(worst) + " (<= 0.65)";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 8: the renormalized residual for beta = ln(1+t) halves (at
// least) when dt and dv are both halved, on converged homogeneous runs.

Outcome criterion8() {
  const BetaFunction beta = BetaFunction::log1p_form();
  double res[2];
  const int nodes[2] = {7, 13};
  const int steps[2] = {6, 12};
  for (int r = 0; r < 2; ++r) {
    SolverConfig cfg;
    cfg.horizon = 0.4;
    cfg.time_steps = steps[r];
    cfg.max_picard_iters = 40;
    cfg.residual_tol = 1e-10;
    cfg.vgrid = build_velocity_grid(3, 4.0, nodes[r]);
    cfg.sgrid = build_spatial_grid(3, 1.0, 1);
    cfg.squad = build_sphere_quadrature(3, 4);
    cfg.kernel = KernelSpec::hard_sphere(0.02, 1.0, 1.0, 1.0);
    const auto [f, rep] = solve(maxwellian_f0(cfg), cfg);
    if (!rep.converged) return {false, "solve did not converge at resolution " + std::to_string(r)};
    res[r] = renorm_residual(f, beta, cfg).residual_l1;
  }

  Outcome out;
  out.passed = res[0] >= 2.0 * res[1];
  out.detail = "residual " + num(res[0]) + " -> " + num(res[1]) + ", ratio " +
               num(res[0] / res[1]) + " (need >= 2)";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 9: renormalized uniqueness: with the q-integral hypothesis
// verified (< 1), the beta-distance of two perturbed runs stays within
// 10 * residual_tol.

Outcome criterion9() {
  const SolverConfig cfg = certified_config();
  const std::vector<double> f0 = maxwellian_f0(cfg);
  const BetaFunction beta = BetaFunction::log1p_form();

  // verify the q-integral hypothesis on the experiment's perturbation scale
  std::mt19937_64 rng(909);
  const DistributionField g = smooth_field(cfg.time_nodes(), cfg.sgrid, cfg.vgrid, rng, 0.01);
  const Theorem2Conditions cond =
      theorem2_condition_check(beta.shifted(std::sqrt(beta.c)), beta, g, cfg);
  if (!cond.q_ok) return {false, "q integral = " + num(cond.q_integral) + " not < 1"};

  const RenormUniquenessReport rep = renorm_uniqueness_experiment(f0, cfg, beta, 909, 0.01);

  Outcome out;
  out.passed = rep.conclusive && cond.ordering_ok && rep.beta_distance <= 10.0 * cfg.residual_tol;
  out.detail = "q integral = " + num(cond.q_integral) + " (< 1), beta distance = " +
               num(rep.beta_distance) + " (<= " + num(10.0 * cfg.residual_tol) + ")";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 10: determinism and formats: byte-identical reports under a
// fixed seed, bit-exact snapshot round trip, and CLI exit codes.

std::vector<char> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  const auto ba = slurp(a);
  return !ba.empty() && ba == slurp(b);
}

Outcome criterion10() {
  const fs::path base = fs::temp_directory_path() / "kfix_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);

  std::string detail;

  // In-process determinism: the uniqueness and solve scenarios twice each.
  ParseResult parsed;
  {
    std::ifstream in(fs::path(KFIX_CONFIG_DIR) / "uniqueness.cfg");
    std::stringstream ss;
    ss << in.rdbuf();
    parsed = parse_config(ss.str());
  }
  if (!parsed.config) return {false, "bundled uniqueness.cfg failed to parse"};

  RunConfig rc = *parsed.config;
  rc.scenario = Scenario::uniqueness;
  rc.seed = 42;
  rc.output_dir = (base / "a").string();
  const int code_a = run_scenario(rc);
  rc.output_dir = (base / "b").string();
  const int code_b = run_scenario(rc);
  bool ok = code_a == kExitPass && code_b == kExitPass;
  ok = ok && same_bytes(base / "a" / "report.json", base / "b" / "report.json");
  detail += std::string("uniqueness reports byte-identical: ") + (ok ? "yes" : "NO");

  {
    std::ifstream in(fs::path(KFIX_CONFIG_DIR) / "solve_homogeneous.cfg");
    std::stringstream ss;
    ss << in.rdbuf();
    parsed = parse_config(ss.str());
    if (!parsed.config) return {false, "bundled solve_homogeneous.cfg failed to parse"};
    RunConfig sc = *parsed.config;
    sc.scenario = Scenario::solve;
    sc.output_dir = (base / "s1").string();
    const int c1 = run_scenario(sc);
    sc.output_dir = (base / "s2").string();
    const int c2 = run_scenario(sc);
    bool solve_ok = c1 == kExitPass && c2 == kExitPass;
    for (const char* name : {"report.json", "moments.csv", "residuals.csv"})
      solve_ok = solve_ok && same_bytes(base / "s1" / name, base / "s2" / name);
    // every snapshot written must agree byte-for-byte
    int snapshots = 0;
    for (const auto& entry : fs::directory_iterator(base / "s1")) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("snapshot_", 0) == 0) {
        ++snapshots;
        solve_ok = solve_ok && same_bytes(entry.path(), base / "s2" / name);
      }
    }
    solve_ok = solve_ok && snapshots > 0;
    ok = ok && solve_ok;
    detail += std::string("; solve outputs byte-identical (incl. ") + std::to_string(snapshots) +
              " snapshots): " + (solve_ok ? "yes" : "NO");
  }

  // Snapshot round trip, bit for bit.
  {
    std::mt19937_64 rng(1010);
    std::vector<double> payload(125);
    for (double& v : payload) v = next_uniform(rng) * 1e3 - 500.0;
    SnapshotHeader h;
    h.dim = 3;
    h.spatial_nodes = 1;
    h.velocity_nodes = 5;
    h.count = payload.size();
    const fs::path p1 = base / "probe.kfx";
    const fs::path p2 = base / "probe2.kfx";
    write_snapshot(p1.string(), h, payload);
    const auto [h2, payload2] = read_snapshot(p1.string());
    write_snapshot(p2.string(), h2, payload2);
    const bool rt = same_bytes(p1, p2);
    ok = ok && rt;
    detail += std::string("; snapshot round trip bit-exact: ") + (rt ? "yes" : "NO");
  }

  // CLI end to end: vacuum solve exits 0, over-strong kernel contraction
  // exits 1.
  {
    const std::string cli = KFIX_CLI_BIN;
    const fs::path cfgdir = KFIX_CONFIG_DIR;
    const std::string cmd_ok = "\"" + cli + "\" solve --config \"" +
                               (cfgdir / "solve_vacuum.cfg").string() + "\" --output \"" +
                               (base / "cli_ok").string() + "\" >/dev/null 2>&1";
    const std::string cmd_fail = "\"" + cli + "\" contraction --config \"" +
                                 (cfgdir / "contraction_huge.cfg").string() + "\" --output \"" +
                                 (base / "cli_fail").string() + "\" >/dev/null 2>&1";
    const int raw_ok = std::system(cmd_ok.c_str());
    const int raw_fail = std::system(cmd_fail.c_str());
    const int code_ok = WIFEXITED(raw_ok) ? WEXITSTATUS(raw_ok) : -1;
    const int code_fail = WIFEXITED(raw_fail) ? WEXITSTATUS(raw_fail) : -1;
    const bool cli_ok = code_ok == kExitPass && code_fail == kExitFail;
    ok = ok && cli_ok;
    detail += std::string("; CLI exit codes (0/1): ") + std::to_string(code_ok) + "/" +
              std::to_string(code_fail);
  }

  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--criterion" && i + 1 < argc) only = std::atoi(argv[i + 1]);
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence of the quadrature operations", criterion1},
      {"conservation defects shrink under refinement", criterion2},
      {"Maxwellian annihilation under refinement", criterion3},
      {"eight-term bilinear regrouping identity", criterion4},
      {"empirical contraction within certified L + slack", criterion5},
      {"fixed-point uniqueness over distinct starts", criterion6},
      {"geometric Picard decay", criterion7},
      {"renormalized residual refinement", criterion8},
      {"renormalized uniqueness within beta tolerance", criterion9},
      {"determinism, reports and snapshot format", criterion10},
  };

  bool all_ok = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only != 0 && only != id) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %s - %s (%.1fs)\n", out.passed ? "PASS" : "FAIL", id,
                criteria[i].first.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
    all_ok = all_ok && out.passed;
  }
  return all_ok ? 0 : 1;
}
