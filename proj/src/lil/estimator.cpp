#include "lillab/lil/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "lillab/error.hpp"
#include "lillab/parallel.hpp"
#include "lillab/random/gaussian.hpp"
#include "lillab/sde/linear_transition.hpp"
#include "lillab/sde/path_io.hpp"
#include "lillab/simd/kernels.hpp"

namespace lillab::lil {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Sorted union of the per-scale grids eps_j * i / m, i = 1..m.
struct UnionGrid {
  std::vector<double> times;                  // times[0] = 0
  std::vector<std::vector<std::size_t>> pos;  // pos[s][i] = union index of node i (pos[s][0] = 0)
};

UnionGrid build_union(const std::vector<double>& eps, std::size_t m) {
  struct Node {
    double t;
    std::size_t s, i;
  };
  std::vector<Node> nodes;
  for (std::size_t s = 0; s < eps.size(); ++s)
    for (std::size_t i = 1; i <= m; ++i) nodes.push_back({eps[s] * double(i) / double(m), s, i});
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.t < b.t; });
  UnionGrid g;
  g.times.push_back(0.0);
  g.pos.assign(eps.size(), std::vector<std::size_t>(m + 1, 0));
  for (const auto& n : nodes) {
    if (n.t > g.times.back()) g.times.push_back(n.t);
    g.pos[n.s][n.i] = g.times.size() - 1;
  }
  return g;
}

struct Context {
  const examples::ExampleSystem& ex;
  const rate::PathFunctional& functional;
  const LilExperimentConfig& cfg;
  std::vector<double> eps;
  std::vector<Vec> alpha;
  std::size_t m;
  UnionGrid grid;
  Mat* values;
};

// Evaluates the functional on the rescaled path built from states x(eps_s * i / m).
double scale_value(const Context& ctx, std::size_t s, const std::vector<Vec>& xs, bool exploded) {
  if (exploded) return kNaN;
  std::vector<Vec> ys;
  ys.reserve(ctx.m + 1);
  for (std::size_t i = 0; i <= ctx.m; ++i)
    ys.push_back(ctx.ex.contraction.apply(ctx.alpha[s], xs[i], ctx.eps[s], double(i) / double(ctx.m)));
  const sde::ExplosivePath path(1.0 / double(ctx.m), ctx.m + 1, std::move(ys), std::nullopt);
  return ctx.functional.value(path);
}

void run_linear_batch(const Context& ctx, std::size_t lane_begin, std::size_t lanes) {
  const auto& lin = *ctx.ex.sde.linear;
  const std::size_t d = ctx.ex.sde.dim_state;
  const std::size_t n_union = ctx.grid.times.size();
  const std::size_t pairs = (d + 1) / 2;
  random::GaussianStream stream(ctx.cfg.seed, random::kStreamLil);

  // States at every union node for this batch: state[node][coord][lane].
  std::vector<double> states(n_union * d * lanes);
  auto at = [&](std::size_t node, std::size_t coord) { return states.data() + (node * d + coord) * lanes; };
  for (std::size_t i = 0; i < d; ++i) std::fill(at(0, i), at(0, i) + lanes, ctx.ex.x0[Eigen::Index(i)]);
  std::vector<double> z(2 * pairs * lanes);
  for (std::size_t n = 1; n < n_union; ++n) {
    const auto tr = sde::linear_transition(lin, ctx.grid.times[n] - ctx.grid.times[n - 1]);
    for (std::size_t q = 0; q < pairs; ++q) {
      stream.lane_pair(std::uint64_t(n) * pairs + q, lane_begin, std::span<double>(z.data() + 2 * q * lanes, lanes),
                       std::span<double>(z.data() + (2 * q + 1) * lanes, lanes));
    }
    if (ctx.cfg.negate_noise) simd::scale(-1.0, z);
    for (std::size_t i = 0; i < d; ++i) {
      std::span<double> out(at(n, i), lanes);
      std::fill(out.begin(), out.end(), 0.0);
      for (std::size_t jx = 0; jx < d; ++jx) {
        const double a = tr.mean_map(Eigen::Index(i), Eigen::Index(jx));
        if (a != 0.0) simd::axpy(a, std::span<const double>(at(n - 1, jx), lanes), out);
        const double f = tr.covariance_factor(Eigen::Index(i), Eigen::Index(jx));
        if (f != 0.0) simd::axpy(f, std::span<const double>(z.data() + jx * lanes, lanes), out);
      }
    }
  }
  std::vector<Vec> xs(ctx.m + 1, Vec(Eigen::Index(d)));
  for (std::size_t l = 0; l < lanes; ++l) {
    for (std::size_t s = 0; s < ctx.eps.size(); ++s) {
      bool exploded = false;
      for (std::size_t i = 0; i <= ctx.m; ++i) {
        const std::size_t node = ctx.grid.pos[s][i];
        for (std::size_t c = 0; c < d; ++c) xs[i][Eigen::Index(c)] = at(node, c)[l];
        if (!ctx.ex.sde.contains(xs[i])) exploded = true;
      }
      (*ctx.values)(Eigen::Index(lane_begin + l), Eigen::Index(s)) = scale_value(ctx, s, xs, exploded);
    }
  }
}

void run_euler_path(const Context& ctx, std::size_t path) {
  const auto& sys = ctx.ex.sde;
  const std::size_t k = sys.dim_noise;
  const std::size_t n_union = ctx.grid.times.size();
  random::GaussianStream stream(ctx.cfg.seed, random::kStreamLil);
  // One Brownian path on the union grid.
  std::vector<Vec> w(n_union, Vec::Zero(Eigen::Index(k)));
  Vec zk = Vec::Zero(Eigen::Index(k));
  for (std::size_t n = 1; n < n_union; ++n) {
    stream.normals(path, std::uint64_t(n) * k, std::span<double>(zk.data(), k));
    if (ctx.cfg.negate_noise) zk = -zk;
    w[n] = w[n - 1] + std::sqrt(ctx.grid.times[n] - ctx.grid.times[n - 1]) * zk;
  }
  std::vector<Vec> xs(ctx.m + 1);
  for (std::size_t s = 0; s < ctx.eps.size(); ++s) {
    const double dt = ctx.eps[s] / double(ctx.m);
    xs[0] = ctx.ex.x0;
    bool exploded = false;
    for (std::size_t i = 1; i <= ctx.m && !exploded; ++i) {
      const Vec& x = xs[i - 1];
      const Vec db = w[ctx.grid.pos[s][i]] - w[ctx.grid.pos[s][i - 1]];
      try {
        xs[i] = x + sys.eval_drift(x) * dt + sys.eval_diffusion(x) * db;
      } catch (const NumericalFailure&) {
        exploded = true;
        break;
      }
      if (!sys.contains(xs[i])) exploded = true;
    }
    (*ctx.values)(Eigen::Index(path), Eigen::Index(s)) = scale_value(ctx, s, xs, exploded);
  }
}

}  // namespace

long LilExperimentConfig::depth_for(double eps0, double c, double eps_min) {
  require(eps0 > 0.0 && c > 0.0 && c < 1.0 && eps_min > 0.0, "depth_for: invalid arguments");
  if (eps_min >= eps0) return 0;
  return long(std::ceil(std::log(eps_min / eps0) / std::log(c) - 1e-9));
}

nlohmann::json LilExperimentConfig::to_json() const {
  return {{"c", c},
          {"j_min", j_min},
          {"j_max", j_max},
          {"eps0", eps0},
          {"n_paths", n_paths},
          {"scheme", std::string(sde::scheme_name(scheme))},
          {"seed", seed},
          {"points_per_scale", points_per_scale},
          {"dt_rel", dt_rel},
          {"explosion_threshold", explosion_threshold},
          {"soft_bracket_factor", soft_bracket_factor},
          {"negate_noise", negate_noise}};
}

std::pair<std::vector<double>, std::vector<double>> running_extremes(const std::vector<double>& values) {
  require(!values.empty(), "running_extremes: empty input");
  std::vector<double> mx(values.size()), mn(values.size());
  double hi = kNaN, lo = kNaN;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isnan(v)) {
      hi = std::isnan(hi) ? v : std::max(hi, v);
      lo = std::isnan(lo) ? v : std::min(lo, v);
    }
    mx[i] = hi;
    mn[i] = lo;
  }
  return {mx, mn};
}

LilReport run_lil_experiment(const examples::ExampleSystem& example, const std::string& functional_name,
                             const LilExperimentConfig& config) {
  require(config.c > 0.0 && config.c < 1.0, "lil: c must lie in (0, 1)");
  require(config.j_min >= 0 && config.j_max >= config.j_min, "lil: need 0 <= j_min <= j_max");
  require(config.n_paths >= 1, "lil: n_paths must be positive");
  require(config.eps0 > 0.0 && config.eps0 <= example.index.eps_star(), "lil: eps0 outside the index validity range");
  require(config.batch >= 1, "lil: batch must be positive");
  const auto& functional = example.functional(functional_name);

  Context ctx{example, functional, config, {}, {}, 0, {}, nullptr};
  LilReport rep;
  rep.config = config;
  rep.example = example.name;
  rep.functional = functional_name;
  for (long j = config.j_min; j <= config.j_max; ++j) {
    const double e = config.eps0 * std::pow(config.c, double(j));
    require(e > 0.0, "lil: eps underflows at this depth");
    rep.j.push_back(j);
    rep.eps.push_back(e);
    ctx.alpha.push_back(example.index(e));
  }
  ctx.eps = rep.eps;
  const std::size_t n_scales = rep.eps.size();
  rep.values = Mat::Constant(Eigen::Index(config.n_paths), Eigen::Index(n_scales), kNaN);
  ctx.values = &rep.values;

  if (config.scheme == sde::Scheme::exact_linear) {
    if (!example.sde.linear) throw InvalidInput("lil: exact_linear requires a linear example");
    require(config.points_per_scale >= 1, "lil: points_per_scale must be positive");
    ctx.m = config.points_per_scale;
    ctx.grid = build_union(rep.eps, ctx.m);
    const std::size_t n_batches = (config.n_paths + config.batch - 1) / config.batch;
    parallel_for(n_batches, config.threads, [&](std::size_t b) {
      const std::size_t begin = b * config.batch;
      run_linear_batch(ctx, begin, std::min(config.batch, config.n_paths - begin));
    });
  } else {
    require(config.dt_rel > 0.0 && config.dt_rel <= 1.0, "lil: dt_rel must lie in (0, 1]");
    ctx.m = std::size_t(std::llround(1.0 / config.dt_rel));
    ctx.grid = build_union(rep.eps, ctx.m);
    parallel_for(config.n_paths, config.threads, [&](std::size_t p) { run_euler_path(ctx, p); });
  }

  rep.running_max.resize(rep.values.rows(), rep.values.cols());
  rep.running_min.resize(rep.values.rows(), rep.values.cols());
  for (Eigen::Index p = 0; p < rep.values.rows(); ++p) {
    std::vector<double> row(n_scales);
    for (std::size_t s = 0; s < n_scales; ++s) {
      row[s] = rep.values(p, Eigen::Index(s));
      if (std::isnan(row[s])) ++rep.explosions;
    }
    const auto [mx, mn] = running_extremes(row);
    for (std::size_t s = 0; s < n_scales; ++s) {
      rep.running_max(p, Eigen::Index(s)) = mx[s];
      rep.running_min(p, Eigen::Index(s)) = mn[s];
    }
  }
  for (std::size_t s = 0; s < n_scales; ++s) {
    double emax = -kInfinity, emin = kInfinity, smax = 0.0, smin = 0.0;
    std::size_t count = 0;
    for (Eigen::Index p = 0; p < rep.values.rows(); ++p) {
      const double a = rep.running_max(p, Eigen::Index(s));
      const double b = rep.running_min(p, Eigen::Index(s));
      if (std::isnan(a)) continue;
      emax = std::max(emax, a);
      emin = std::min(emin, b);
      smax += a;
      smin += b;
      ++count;
    }
    rep.envelope_max.push_back(count ? emax : kNaN);
    rep.envelope_min.push_back(count ? emin : kNaN);
    rep.mean_running_max.push_back(count ? smax / double(count) : kNaN);
    rep.mean_running_min.push_back(count ? smin / double(count) : kNaN);
  }
  rep.explosion_fraction = double(rep.explosions) / double(config.n_paths * n_scales);
  rep.explosion_flag = rep.explosion_fraction > config.explosion_threshold;
  rep.theoretical_max = example.constant(functional_name + ".M");
  rep.theoretical_min = example.constant(functional_name + ".m");
  for (const auto& c : example.reference_constants) {
    if (c.name == functional_name + ".M") rep.max_provenance = c.provenance;
    if (c.name == functional_name + ".m") rep.min_provenance = c.provenance;
  }
  if (rep.theoretical_max && !rep.mean_running_max.empty()) {
    const double last = rep.mean_running_max.back();
    const double mt = *rep.theoretical_max;
    rep.bracket_flag = last > mt + std::abs(mt) * (config.soft_bracket_factor - 1.0);
  }
  return rep;
}

void LilReport::write_csv(std::ostream& os) const {
  os << "path_id,j,eps,value,running_max,running_min\n";
  for (std::size_t p = 0; p < n_paths(); ++p)
    for (std::size_t s = 0; s < n_scales(); ++s)
      os << p << ',' << j[s] << ',' << sde::format_double(eps[s]) << ','
         << sde::format_double(values(Eigen::Index(p), Eigen::Index(s))) << ','
         << sde::format_double(running_max(Eigen::Index(p), Eigen::Index(s))) << ','
         << sde::format_double(running_min(Eigen::Index(p), Eigen::Index(s))) << '\n';
}

nlohmann::json LilReport::to_json() const {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  auto arr = [](const std::vector<double>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (double x : v) a.push_back(std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr));
    return a;
  };
  nlohmann::json jout;
  jout["example"] = example;
  jout["functional"] = functional;
  jout["config"] = config.to_json();
  jout["j"] = j;
  jout["eps"] = eps;
  jout["envelope_max"] = arr(envelope_max);
  jout["envelope_min"] = arr(envelope_min);
  jout["mean_running_max"] = arr(mean_running_max);
  jout["mean_running_min"] = arr(mean_running_min);
  jout["theoretical_max"] = {{"value", opt(theoretical_max)}, {"provenance", max_provenance}};
  jout["theoretical_min"] = {{"value", opt(theoretical_min)}, {"provenance", min_provenance}};
  jout["explosions"] = explosions;
  jout["explosion_fraction"] = explosion_fraction;
  jout["explosion_flag"] = explosion_flag;
  jout["bracket_flag"] = bracket_flag;
  jout["single_omega"] = single_omega;
  return jout;
}

}  // namespace lillab::lil
