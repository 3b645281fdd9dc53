#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "lillab/error.hpp"
#include "lillab/examples/registry.hpp"
#include "lillab/lil/estimator.hpp"
#include "lillab/rate/optimizer.hpp"
#include "lillab/regularity/criteria.hpp"
#include "lillab/regularity/polygonalize.hpp"
#include "lillab/regularity/reach.hpp"
#include "lillab/scaling/checks.hpp"
#include "lillab/scaling/rescale.hpp"
#include "lillab/sde/noise.hpp"
#include "lillab/sde/path_io.hpp"
#include "lillab/sde/simulate.hpp"

namespace lillab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

bool Context::wants(const std::string& format) const {
  return std::find(s.formats.begin(), s.formats.end(), format) != s.formats.end();
}

fs::path Context::file(const std::string& name) {
  std::error_code ec;
  fs::create_directories(s.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + s.out_dir + "': " + ec.message());
  outputs.push_back(name);
  return fs::path(s.out_dir) / name;
}

void Context::write_text(const std::string& name, const std::function<void(std::ostream&)>& writer) {
  const fs::path p = file(name);
  std::ofstream os(p, std::ios::binary);
  if (!os) throw IoError("cannot open '" + p.string() + "' for writing");
  writer(os);
  if (!os) throw IoError("write failed for '" + p.string() + "'");
}

void Context::write_json(const std::string& name, const json& j) {
  write_text(name, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

namespace {

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), Eigen::Index(v.size())); }

examples::ExampleSystem load_example(const Settings& s) {
  examples::ExampleParams p;
  p.d = s.d;
  if (!s.x0.empty()) p.x0 = to_vec(s.x0);
  return examples::get_example(s.example, p);
}

void add_example_options(CLI::App* sub, Settings& s) {
  sub->add_option("--example,-e", s.example, "Registered example name")->capture_default_str();
  sub->add_option("--d", s.d, "Dimension parameter (iterated_kolmogorov, brownian)");
  sub->add_option("--x0", s.x0, "Start point (shifted_kolmogorov)")->delimiter(',');
}

rate::OptimizerConfig optimizer_config(const Settings& s) {
  rate::OptimizerConfig c;
  c.n_steps = s.n_steps;
  c.restarts = s.restarts;
  c.max_iterations = s.max_iterations;
  c.tolerance = s.tolerance;
  c.initial_step = s.initial_step;
  c.init_modes = s.init_modes;
  c.seed = s.seed;
  c.threads = s.threads;
  return c;
}

void add_optimizer_options(CLI::App* sub, Settings& s) {
  sub->add_option("--n-steps", s.n_steps, "Control grid size N")->capture_default_str();
  sub->add_option("--restarts", s.restarts, "Random restarts")->capture_default_str();
  sub->add_option("--max-iterations", s.max_iterations, "Iterations per restart")->capture_default_str();
  sub->add_option("--tolerance", s.tolerance, "Projected gradient tolerance")->capture_default_str();
  sub->add_option("--initial-step", s.initial_step, "Initial step in L2 units")->capture_default_str();
  sub->add_option("--init-modes", s.init_modes, "Fourier modes of random starts")->capture_default_str();
}

// ---- commands ----

void cmd_simulate(Context& ctx) {
  const Settings& s = ctx.s;
  const auto ex = load_example(s);
  const auto noise = sde::brownian_path(s.seed, s.dt, s.horizon, ex.sde.dim_noise, s.path_index);
  const auto path = sde::simulate_sde(ex.sde, ex.x0, noise, s.horizon, sde::parse_scheme(s.scheme));
  if (ctx.wants("csv")) ctx.write_text("path.csv", [&](std::ostream& os) { sde::write_csv(path, os); });
  if (ctx.wants("json")) ctx.write_json("path.json", sde::to_json(path));
  ctx.summary = {{"example", ex.name},
                 {"grid_size", path.grid_size()},
                 {"exploded", path.exploded()},
                 {"explosion_time", path.exploded() ? json(path.explosion_time()) : json(nullptr)}};
}

void cmd_rescale(Context& ctx) {
  const Settings& s = ctx.s;
  const auto ex = load_example(s);
  // Original path on [0, eps * horizon] with step eps * dt, so the rescaled grid has step dt.
  const auto noise = sde::brownian_path(s.seed, s.eps * s.dt, s.eps * s.horizon, ex.sde.dim_noise, s.path_index);
  const auto path = sde::simulate_sde(ex.sde, ex.x0, noise, s.eps * s.horizon, sde::parse_scheme(s.scheme));
  const auto y = scaling::rescale_path(path, ex.contraction, ex.index, s.eps, s.horizon);
  if (ctx.wants("csv")) {
    ctx.write_text("original.csv", [&](std::ostream& os) { sde::write_csv(path, os); });
    ctx.write_text("rescaled.csv", [&](std::ostream& os) { sde::write_csv(y, os); });
  }
  if (ctx.wants("json")) ctx.write_json("rescaled.json", sde::to_json(y));
  ctx.summary = {{"example", ex.name}, {"eps", s.eps}, {"grid_size", y.grid_size()}, {"exploded", y.exploded()}};
}

void cmd_optimize(Context& ctx) {
  const Settings& s = ctx.s;
  const auto ex = load_example(s);
  const std::string fname = s.functional.empty() ? ex.default_functional : s.functional;
  const auto& functional = ex.functional(fname);
  const auto cfg = optimizer_config(s);
  std::vector<rate::Sense> senses;
  if (s.sense == "both")
    senses = {rate::Sense::maximize, rate::Sense::minimize};
  else
    senses = {rate::parse_sense(s.sense)};

  json result = {{"example", ex.name}, {"params", ex.params}, {"functional", fname}};
  json summary = result;
  for (auto sense : senses) {
    const auto res = rate::optimize_extremal(ex.limit_problem, functional, sense, cfg);
    const std::string key = rate::sense_name(sense);
    const std::string tag = sense == rate::Sense::maximize ? "M" : "m";
    json entry = res.to_json(false);
    entry["control_energy"] = res.argext.energy();
    if (auto ref = ex.constant(fname + "." + tag)) entry["reference"] = *ref;
    if (senses.size() == 1) {
      for (auto& [k, v] : entry.items()) result[k] = v;
      summary["value"] = res.value;
      summary["sense"] = key;
    } else {
      result[key] = entry;
      summary[key] = res.value;
    }
    const auto path = rate::solve_control_ode(ex.limit_problem, res.argext);
    if (ctx.wants("csv"))
      ctx.write_text("extremal_path_" + key + ".csv", [&](std::ostream& os) { sde::write_csv(path, os); });
    if (ctx.wants("json")) ctx.write_json("control_" + key + ".json", res.to_json(true));
  }
  ctx.write_json("result.json", result);
  ctx.summary = summary;
}

void cmd_lil(Context& ctx) {
  const Settings& s = ctx.s;
  const auto ex = load_example(s);
  const std::string fname = s.functional.empty() ? ex.default_functional : s.functional;
  lil::LilExperimentConfig cfg;
  cfg.c = s.c;
  cfg.j_min = s.j_min;
  cfg.j_max = s.j_max;
  cfg.eps0 = s.eps0;
  cfg.n_paths = s.paths;
  cfg.scheme = sde::parse_scheme(s.lil_scheme);
  cfg.seed = s.seed;
  cfg.points_per_scale = s.points_per_scale;
  cfg.dt_rel = s.dt_rel;
  cfg.negate_noise = s.negate;
  cfg.threads = s.threads;
  const auto report = lil::run_lil_experiment(ex, fname, cfg);
  if (ctx.wants("csv")) ctx.write_text("lil.csv", [&](std::ostream& os) { report.write_csv(os); });
  if (ctx.wants("json")) ctx.write_json("lil.json", report.to_json());
  const auto last = report.n_scales() - 1;
  ctx.summary = {{"example", ex.name},
                 {"functional", fname},
                 {"scales", report.n_scales()},
                 {"mean_running_max", report.mean_running_max[last]},
                 {"mean_running_min", report.mean_running_min[last]},
                 {"explosion_fraction", report.explosion_fraction}};
}

regularity::DomainSpec build_domain(const Settings& s, std::size_t d) {
  const Vec center = s.center.empty() ? Vec(Vec::Zero(Eigen::Index(d))) : to_vec(s.center);
  require(std::size_t(center.size()) == d, "--center has the wrong dimension");
  if (s.domain == "ball") return regularity::ball_domain(center, s.radius);
  if (s.domain == "ellipsoid") {
    require(s.semi_axes.size() == d, "--semi-axes must have one entry per dimension");
    return regularity::ellipsoid_domain(center, to_vec(s.semi_axes));
  }
  throw InvalidInput("unknown domain '" + s.domain + "' (expected ball or ellipsoid)");
}

void add_domain_options(CLI::App* sub, Settings& s) {
  sub->add_option("--domain", s.domain, "ball or ellipsoid")->capture_default_str();
  sub->add_option("--center", s.center, "Domain center")->delimiter(',');
  sub->add_option("--radius", s.radius, "Ball radius")->capture_default_str();
  sub->add_option("--semi-axes", s.semi_axes, "Ellipsoid semi-axes")->delimiter(',');
}

void cmd_sphere(Context& ctx) {
  const Settings& s = ctx.s;
  const auto ex = load_example(s);
  const auto domain = build_domain(s, ex.sde.dim_state);
  regularity::CriterionOptions opt;
  opt.tolerance = s.criterion_tolerance;
  const auto rep = regularity::sphere_criterion(ex.sde, domain, to_vec(s.point), opt);
  json j = rep.to_json();
  j["point"] = s.point;
  j["example"] = ex.name;
  ctx.write_json("verdict.json", j);
  ctx.summary = j;
}

void cmd_cone(Context& ctx) {
  const Settings& s = ctx.s;
  const auto ex = load_example(s);
  const std::size_t d = ex.sde.dim_state;
  const auto domain = build_domain(s, d);
  require(s.basis.size() == d * d, "--basis needs d*d entries (basis vectors one after another)");
  const Mat b = Eigen::Map<const Mat>(s.basis.data(), Eigen::Index(d), Eigen::Index(d));
  regularity::CriterionOptions opt;
  opt.tolerance = s.criterion_tolerance;
  const auto rep = regularity::cone_criterion(ex.sde, domain, to_vec(s.point), b, opt);
  json j = rep.to_json();
  j["point"] = s.point;
  j["example"] = ex.name;
  ctx.write_json("verdict.json", j);
  ctx.summary = j;
}

void cmd_reach(Context& ctx) {
  const Settings& s = ctx.s;
  const auto ex = load_example(s);
  regularity::ReachConfig cfg;
  cfg.tolerance = s.reach_tolerance;
  cfg.optimizer = optimizer_config(s);
  const auto rep = regularity::reach_target(ex.limit_problem, to_vec(s.target), s.reach_t, cfg);
  json j = rep.to_json(false);
  j["example"] = ex.name;
  ctx.write_json("reach.json", j);
  ctx.summary = j;
}

void cmd_polygonalize(Context& ctx) {
  const Settings& s = ctx.s;
  const std::size_t d = s.center.empty() ? (s.semi_axes.empty() ? 2 : s.semi_axes.size()) : s.center.size();
  const auto domain = build_domain(s, d);
  Vec v;
  if (s.direction.empty()) {
    v = Vec::Zero(Eigen::Index(d));
    v[Eigen::Index(d) - 1] = 1.0;
  } else {
    v = to_vec(s.direction);
  }
  const auto poly = regularity::polygonalize(domain, v, s.samples, s.seed);
  if (ctx.wants("csv")) ctx.write_text("polygon.csv", [&](std::ostream& os) { poly.write_csv(os); });
  if (ctx.wants("json")) ctx.write_json("polygon.json", poly.to_json());
  ctx.summary = {{"facets", poly.hull.facets.size()},
                 {"volume", poly.volume},
                 {"domain_volume", poly.domain_volume},
                 {"deficit", poly.deficit},
                 {"no_parallel_facet", regularity::face_parallel_check(poly, v, s.criterion_tolerance)}};
}

void cmd_examples_list(Context& ctx) {
  const auto names = examples::example_names();
  ctx.write_json("examples.json", {{"examples", names}});
  ctx.summary = {{"examples", names}};
}

void cmd_examples_describe(Context& ctx) {
  const auto ex = load_example(ctx.s);
  const json j = ex.descriptor();
  ctx.write_json("example.json", j);
  ctx.summary = j;
}

void cmd_check(Context& ctx) {
  const Settings& s = ctx.s;
  const auto ex = load_example(s);
  json j = {{"example", ex.name}, {"params", ex.params}};
  const auto sys = sde::check_system(ex.sde, ex.probe_box_lo, ex.probe_box_hi, 512, s.seed);
  j["system"] = {{"ok", sys.ok}, {"samples_in_domain", sys.samples_in_domain}, {"message", sys.message}};
  const auto rows = examples::coefficient_deviation_table(ex, {1e-2, 1e-4, 1e-6, 1e-8});
  json dev = json::array();
  for (const auto& r : rows)
    dev.push_back({{"eps", r.eps}, {"drift", r.drift_deviation}, {"diffusion", r.diffusion_deviation}});
  j["coefficient_deviation"] = dev;
  j["coefficient_deviation_decreasing"] = examples::deviation_decreasing(rows);
  // First depth where c^j falls inside the index validity range.
  const long j_lo = std::max(1L, long(std::ceil(std::log(ex.index.eps_star()) / std::log(s.c) - 1e-9)));
  j["index"] = scaling::check_asymptotic_index(ex.index, s.c, j_lo, j_lo + 63, 0.05).to_json();
  if (!ex.contraction.time_dependent()) {
    std::vector<std::pair<Vec, Vec>> samples = {{ex.box_lo, ex.box_hi}, {ex.x0, ex.box_hi}, {ex.box_lo, ex.x0}};
    std::vector<std::pair<Vec, Vec>> alphas;
    for (double e : {1e-2, 1e-3, 1e-4, 1e-5}) alphas.push_back({ex.index(e), ex.index(e / 10.0)});
    j["contraction"] = scaling::check_contraction_family(ex.contraction, samples, alphas, 1e-6).to_json();
  } else {
    j["contraction"] = {{"skipped", "time-dependent family"}};
  }
  ctx.write_json("check.json", j);
  ctx.summary = {{"example", ex.name},
                 {"system_ok", sys.ok},
                 {"coefficient_deviation_decreasing", j["coefficient_deviation_decreasing"]}};
}

}  // namespace

std::map<std::string, std::function<void(Context&)>> register_commands(CLI::App& app, Settings& s) {
  std::map<std::string, std::function<void(Context&)>> actions;

  auto* sim = app.add_subcommand("simulate", "Simulate one path of an example SDE");
  add_example_options(sim, s);
  sim->add_option("--dt", s.dt, "Time step")->capture_default_str();
  sim->add_option("--horizon", s.horizon, "Final time")->capture_default_str();
  sim->add_option("--scheme", s.scheme, "euler or exact_linear")->capture_default_str();
  sim->add_option("--path-index", s.path_index, "Noise lane")->capture_default_str();
  actions["simulate"] = cmd_simulate;

  auto* res = app.add_subcommand("rescale", "Simulate on [0, eps T] and apply the rescaling");
  add_example_options(res, s);
  res->add_option("--eps", s.eps, "Scale parameter")->capture_default_str();
  res->add_option("--dt", s.dt, "Rescaled time step")->capture_default_str();
  res->add_option("--horizon", s.horizon, "Rescaled final time")->capture_default_str();
  res->add_option("--scheme", s.scheme, "euler or exact_linear")->capture_default_str();
  res->add_option("--path-index", s.path_index, "Noise lane")->capture_default_str();
  actions["rescale"] = cmd_rescale;

  auto* opt = app.add_subcommand("optimize", "Extremal constants of a functional over the limit set");
  add_example_options(opt, s);
  opt->add_option("--functional,-f", s.functional, "Functional name (default: the example's)");
  opt->add_option("--sense", s.sense, "max, min or both")->check(CLI::IsMember({"max", "min", "both"}))->capture_default_str();
  add_optimizer_options(opt, s);
  actions["optimize"] = cmd_optimize;

  auto* lil = app.add_subcommand("lil-verify", "Monte Carlo running extremes along eps_j = eps0 c^j");
  add_example_options(lil, s);
  lil->add_option("--functional,-f", s.functional, "Functional name (default: the example's)");
  lil->add_option("--c", s.c, "Geometric ratio in (0, 1)")->capture_default_str();
  lil->add_option("--j-min", s.j_min, "First depth")->capture_default_str();
  lil->add_option("--j-max", s.j_max, "Last depth")->capture_default_str();
  lil->add_option("--eps0", s.eps0, "Base scale")->capture_default_str();
  lil->add_option("--paths", s.paths, "Number of paths")->capture_default_str();
  lil->add_option("--scheme", s.lil_scheme, "exact_linear or euler")->capture_default_str();
  lil->add_option("--points-per-scale", s.points_per_scale, "Grid points per scale (exact_linear)")->capture_default_str();
  lil->add_option("--dt-rel", s.dt_rel, "Relative Euler step")->capture_default_str();
  lil->add_flag("--negate", s.negate, "Use the reflected noise");
  actions["lil-verify"] = cmd_lil;

  auto* reg = app.add_subcommand("regularity", "Boundary regularity tools");
  reg->require_subcommand(1);
  auto* sph = reg->add_subcommand("sphere", "Exterior sphere criterion");
  add_example_options(sph, s);
  add_domain_options(sph, s);
  sph->add_option("--point", s.point, "Boundary point")->delimiter(',')->required();
  sph->add_option("--tolerance", s.criterion_tolerance, "Margin tolerance")->capture_default_str();
  actions["regularity sphere"] = cmd_sphere;
  auto* cone = reg->add_subcommand("cone", "Exterior cone criterion");
  add_example_options(cone, s);
  add_domain_options(cone, s);
  cone->add_option("--point", s.point, "Boundary point")->delimiter(',')->required();
  cone->add_option("--basis", s.basis, "Cone generators, concatenated")->delimiter(',')->required();
  cone->add_option("--tolerance", s.criterion_tolerance, "Margin tolerance")->capture_default_str();
  actions["regularity cone"] = cmd_cone;
  auto* reach = reg->add_subcommand("reach", "Reachability of a target by the limit ODE");
  add_example_options(reach, s);
  reach->add_option("--target", s.target, "Target state")->delimiter(',')->required();
  reach->add_option("--t", s.reach_t, "Time")->capture_default_str();
  reach->add_option("--miss-tolerance", s.reach_tolerance, "Terminal miss counted as reached")->capture_default_str();
  add_optimizer_options(reach, s);
  actions["regularity reach"] = cmd_reach;
  auto* poly = reg->add_subcommand("polygonalize", "Random convex hull of boundary samples");
  add_domain_options(poly, s);
  poly->add_option("--direction", s.direction, "Direction v for the parallel audit")->delimiter(',');
  poly->add_option("--samples,-n", s.samples, "Number of boundary samples")->capture_default_str();
  poly->add_option("--tolerance", s.criterion_tolerance, "Parallel audit tolerance")->capture_default_str();
  actions["regularity polygonalize"] = cmd_polygonalize;

  auto* exs = app.add_subcommand("examples", "Example registry");
  exs->require_subcommand(1);
  exs->add_subcommand("list", "List registered examples");
  actions["examples list"] = cmd_examples_list;
  auto* desc = exs->add_subcommand("describe", "Describe one example");
  add_example_options(desc, s);
  actions["examples describe"] = cmd_examples_describe;

  auto* chk = app.add_subcommand("check", "Runtime checks of an example's structural assumptions");
  add_example_options(chk, s);
  chk->add_option("--c", s.c, "Geometric ratio for the index check")->capture_default_str();
  actions["check"] = cmd_check;
  return actions;
}

}  // namespace lillab::cli
