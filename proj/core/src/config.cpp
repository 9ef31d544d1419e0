#include "kfix/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>

namespace kfix {

std::optional<Scenario> scenario_from_name(std::string_view name) {
  if (name == "solve") return Scenario::solve;
  if (name == "check-kernel") return Scenario::check_kernel;
  if (name == "contraction") return Scenario::contraction;
  if (name == "uniqueness") return Scenario::uniqueness;
  if (name == "renorm-check") return Scenario::renorm_check;
  return std::nullopt;
}

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::solve: return "solve";
    case Scenario::check_kernel: return "check-kernel";
    case Scenario::contraction: return "contraction";
    case Scenario::uniqueness: return "uniqueness";
    case Scenario::renorm_check: return "renorm-check";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct RawEntry {
  std::string value;
  int line = 0;
  bool used = false;
};

// One pass of tokenizing into section-qualified entries, then typed,
// validated extraction below; errors accumulate instead of aborting.
struct Extractor {
  std::map<std::string, RawEntry> entries;
  std::vector<ConfigError>* errors;

  void fail(int line, std::string msg) { errors->push_back({line, std::move(msg)}); }

  RawEntry* find(const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  void get_double(const std::string& key, double& out) {
    RawEntry* e = find(key);
    if (!e) return;
    const std::string& v = e->value;
    char* end = nullptr;
    const double parsed = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(parsed)) {
      fail(e->line, "key '" + key + "': expected a finite real number, got '" + v + "'");
      return;
    }
    out = parsed;
  }

  void get_int(const std::string& key, int& out) {
    RawEntry* e = find(key);
    if (!e) return;
    int parsed = 0;
    const auto [p, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), parsed);
    if (ec != std::errc() || p != e->value.data() + e->value.size()) {
      fail(e->line, "key '" + key + "': expected an integer, got '" + e->value + "'");
      return;
    }
    out = parsed;
  }

  void get_u64(const std::string& key, std::uint64_t& out) {
    RawEntry* e = find(key);
    if (!e) return;
    std::uint64_t parsed = 0;
    const auto [p, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), parsed);
    if (ec != std::errc() || p != e->value.data() + e->value.size()) {
      fail(e->line, "key '" + key + "': expected a nonnegative integer, got '" + e->value + "'");
      return;
    }
    out = parsed;
  }

  void get_string(const std::string& key, std::string& out) {
    if (RawEntry* e = find(key)) out = e->value;
  }

  int line_of(const std::string& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second.line;
  }
};

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "grid.dim", "grid.velocity_extent", "grid.velocity_nodes", "grid.sphere_order",
      "grid.spatial_nodes", "grid.spatial_period",
      "kernel.form", "kernel.strength", "kernel.lambda", "kernel.b1", "kernel.b", "kernel.mu",
      "initial.type", "initial.amplitude", "initial.width", "initial.space_variation",
      "solver.horizon", "solver.time_steps", "solver.max_picard_iters", "solver.residual_tol",
      "experiment.seed", "experiment.perturbations", "experiment.pairs",
      "experiment.perturbation_scale", "experiment.contraction_slack", "experiment.speed_samples",
      "renorm.beta", "renorm.beta_scale", "renorm.beta_saturation",
      "output.dir", "output.snapshot_interval",
  };
  return keys;
}

}  // namespace

ParseResult parse_config(std::string_view text) {
  ParseResult result;
  Extractor ex;
  ex.errors = &result.errors;

  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        result.errors.push_back({line_no, "unterminated section header"});
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) result.errors.push_back({line_no, "empty section name"});
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      result.errors.push_back({line_no, "expected 'key = value', got '" + std::string(line) + "'"});
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      result.errors.push_back({line_no, "empty key"});
      continue;
    }
    if (section.empty()) {
      result.errors.push_back({line_no, "key '" + key + "' outside any [section]"});
      continue;
    }
    const std::string full = section + "." + key;
    if (std::find(known_keys().begin(), known_keys().end(), full) == known_keys().end()) {
      result.errors.push_back({line_no, "unknown key '" + full + "'"});
      continue;
    }
    if (ex.entries.count(full)) {
      result.errors.push_back({line_no, "duplicate key '" + full + "'"});
      continue;
    }
    ex.entries[full] = RawEntry{value, line_no, false};
  }

  RunConfig rc;
  ex.get_int("grid.dim", rc.dim);
  ex.get_double("grid.velocity_extent", rc.velocity_extent);
  ex.get_int("grid.velocity_nodes", rc.velocity_nodes);
  ex.get_int("grid.sphere_order", rc.sphere_order);
  ex.get_int("grid.spatial_nodes", rc.spatial_nodes);
  ex.get_double("grid.spatial_period", rc.spatial_period);

  if (RawEntry* e = ex.find("kernel.form")) {
    if (e->value == "hard_sphere") rc.kernel_form = KernelForm::hard_sphere;
    else if (e->value == "maxwell") rc.kernel_form = KernelForm::maxwell;
    else if (e->value == "variable_hard_sphere") rc.kernel_form = KernelForm::variable_hard_sphere;
    else ex.fail(e->line, "kernel.form must be hard_sphere, maxwell or variable_hard_sphere");
  }
  ex.get_double("kernel.strength", rc.kernel_strength);
  const bool has_lambda = ex.entries.count("kernel.lambda") != 0;
  ex.get_double("kernel.lambda", rc.kernel_lambda);
  ex.get_double("kernel.b1", rc.kernel_b1);
  ex.get_double("kernel.b", rc.kernel_b);
  ex.get_double("kernel.mu", rc.kernel_mu);

  if (RawEntry* e = ex.find("initial.type")) {
    if (e->value == "vacuum") rc.initial_type = InitialType::vacuum;
    else if (e->value == "maxwellian") rc.initial_type = InitialType::maxwellian;
    else ex.fail(e->line, "initial.type must be vacuum or maxwellian");
  }
  ex.get_double("initial.amplitude", rc.initial_amplitude);
  ex.get_double("initial.width", rc.initial_width);
  ex.get_double("initial.space_variation", rc.initial_space_variation);

  ex.get_double("solver.horizon", rc.horizon);
  ex.get_int("solver.time_steps", rc.time_steps);
  ex.get_int("solver.max_picard_iters", rc.max_picard_iters);
  ex.get_double("solver.residual_tol", rc.residual_tol);

  ex.get_u64("experiment.seed", rc.seed);
  ex.get_int("experiment.perturbations", rc.perturbations);
  ex.get_int("experiment.pairs", rc.pairs);
  ex.get_double("experiment.perturbation_scale", rc.perturbation_scale);
  ex.get_double("experiment.contraction_slack", rc.contraction_slack);
  ex.get_int("experiment.speed_samples", rc.speed_samples);

  if (RawEntry* e = ex.find("renorm.beta")) {
    if (e->value == "log1p") rc.beta_form = BetaForm::log1p;
    else if (e->value == "scaled_log1p") rc.beta_form = BetaForm::scaled_log1p;
    else if (e->value == "custom_rational") rc.beta_form = BetaForm::custom_rational;
    else ex.fail(e->line, "renorm.beta must be log1p, scaled_log1p or custom_rational");
  }
  ex.get_double("renorm.beta_scale", rc.beta_scale);
  ex.get_double("renorm.beta_saturation", rc.beta_saturation);

  ex.get_string("output.dir", rc.output_dir);
  ex.get_int("output.snapshot_interval", rc.snapshot_interval);

  // Constraint validation; every violation is reported with its line.
  auto require = [&](bool ok, const std::string& key, const std::string& why) {
    if (!ok) result.errors.push_back({ex.line_of(key), "key '" + key + "': " + why});
  };

  require(rc.dim == 2 || rc.dim == 3, "grid.dim", "must be 2 or 3");
  require(rc.velocity_extent > 0.0, "grid.velocity_extent", "must be positive");
  require(rc.velocity_nodes >= 4, "grid.velocity_nodes", "must be >= 4");
  require(rc.velocity_nodes % 2 == 1, "grid.velocity_nodes",
          "must be odd so the origin is a grid node");
  require(rc.sphere_order >= 4, "grid.sphere_order", "must be >= 4");
  require(rc.spatial_nodes >= 1, "grid.spatial_nodes", "must be >= 1");
  require(rc.spatial_period > 0.0, "grid.spatial_period", "must be positive");

  require(rc.kernel_strength >= 0.0, "kernel.strength", "must be >= 0");
  require(rc.kernel_b1 > 0.0, "kernel.b1", "must be positive");
  require(rc.kernel_b > 0.0, "kernel.b", "must be positive");
  require(rc.kernel_mu >= 0.0, "kernel.mu", "must be >= 0");
  if (has_lambda && rc.kernel_form != KernelForm::variable_hard_sphere)
    result.errors.push_back(
        {ex.line_of("kernel.lambda"), "kernel.lambda only applies to variable_hard_sphere"});

  require(rc.initial_amplitude >= 0.0, "initial.amplitude", "must be >= 0");
  require(rc.initial_width > 0.0, "initial.width", "must be positive");
  require(rc.initial_space_variation >= 0.0 && rc.initial_space_variation <= 1.0,
          "initial.space_variation", "must lie in [0, 1]");
  if (rc.initial_space_variation > 0.0 && rc.spatial_nodes == 1)
    result.errors.push_back({ex.line_of("initial.space_variation"),
                             "initial.space_variation needs grid.spatial_nodes > 1"});

  require(rc.horizon > 0.0, "solver.horizon", "must be positive");
  require(rc.time_steps >= 1, "solver.time_steps", "must be >= 1");
  require(rc.max_picard_iters >= 1, "solver.max_picard_iters", "must be >= 1");
  require(rc.residual_tol > 0.0, "solver.residual_tol", "must be positive");

  require(rc.perturbations >= 1, "experiment.perturbations", "must be >= 1");
  require(rc.pairs >= 1, "experiment.pairs", "must be >= 1");
  require(rc.perturbation_scale > 0.0, "experiment.perturbation_scale", "must be positive");
  require(rc.contraction_slack >= 0.0, "experiment.contraction_slack", "must be >= 0");
  require(rc.speed_samples >= 1, "experiment.speed_samples", "must be >= 1");

  require(rc.beta_scale > 0.0, "renorm.beta_scale", "must be positive");
  require(rc.beta_saturation > 0.0, "renorm.beta_saturation", "must be positive");
  require(rc.snapshot_interval >= 0, "output.snapshot_interval", "must be >= 0");

  if (result.errors.empty()) result.config = rc;
  return result;
}

SolverConfig build_solver_config(const RunConfig& rc) {
  SolverConfig sc;
  sc.horizon = rc.horizon;
  sc.time_steps = rc.time_steps;
  sc.max_picard_iters = rc.max_picard_iters;
  sc.residual_tol = rc.residual_tol;
  sc.vgrid = build_velocity_grid(rc.dim, rc.velocity_extent, rc.velocity_nodes);
  sc.sgrid = build_spatial_grid(rc.dim, rc.spatial_period, rc.spatial_nodes);
  sc.squad = build_sphere_quadrature(rc.dim, rc.sphere_order);
  switch (rc.kernel_form) {
    case KernelForm::hard_sphere:
      sc.kernel = KernelSpec::hard_sphere(rc.kernel_strength, rc.kernel_b1, rc.kernel_b,
                                          rc.kernel_mu);
      break;
    case KernelForm::maxwell:
      sc.kernel = KernelSpec::maxwell(rc.kernel_strength, rc.kernel_b1, rc.kernel_b, rc.kernel_mu);
      break;
    case KernelForm::variable_hard_sphere:
      sc.kernel = KernelSpec::variable_hard_sphere(rc.kernel_strength, rc.kernel_lambda,
                                                   rc.kernel_b1, rc.kernel_b, rc.kernel_mu);
      break;
  }
  return sc;
}

std::vector<double> initial_slice(const RunConfig& rc, const SolverConfig& sc) {
  const std::size_t nx = static_cast<std::size_t>(sc.sgrid.num_nodes());
  const std::size_t nv = static_cast<std::size_t>(sc.vgrid.num_nodes());
  std::vector<double> f0(nx * nv, 0.0);
  if (rc.initial_type == InitialType::vacuum) return f0;

  const double inv_w2 = 1.0 / (rc.initial_width * rc.initial_width);
  std::vector<double> vslice(nv);
  for (std::size_t iv = 0; iv < nv; ++iv)
    vslice[iv] = rc.initial_amplitude * std::exp(-norm2(sc.vgrid.node(static_cast<int>(iv))) * inv_w2);

  for (std::size_t ix = 0; ix < nx; ++ix) {
    double sx = 1.0;
    if (!sc.sgrid.homogeneous() && rc.initial_space_variation > 0.0) {
      const Vec3 x = sc.sgrid.node(static_cast<int>(ix));
      double mod = 1.0;
      for (int a = 0; a < sc.sgrid.dim; ++a)
        mod *= std::cos(2.0 * std::numbers::pi * x[static_cast<std::size_t>(a)] / sc.sgrid.period);
      sx = 1.0 + rc.initial_space_variation * mod;
    }
    for (std::size_t iv = 0; iv < nv; ++iv) f0[ix * nv + iv] = sx * vslice[iv];
  }
  return f0;
}

BetaFunction beta_from_config(const RunConfig& rc) {
  switch (rc.beta_form) {
    case BetaForm::log1p: return BetaFunction::log1p_form();
    case BetaForm::scaled_log1p: return BetaFunction::scaled_log1p(rc.beta_scale);
    case BetaForm::custom_rational:
      return BetaFunction::custom_rational(rc.beta_scale, rc.beta_saturation);
  }
  return BetaFunction::log1p_form();
}

}  // namespace kfix
