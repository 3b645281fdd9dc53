#include "lillab/examples/registry.hpp"

#include <cmath>
#include <numbers>

#include "lillab/error.hpp"

namespace lillab::examples {

namespace {

using scaling::AsymptoticIndex;
using scaling::ContractionFamily;
using scaling::IndexExponent;

// F(g) = w . g(t_end) - offset, undefined (nan) if the path explodes first.
rate::PathFunctional terminal_functional(std::string name, Vec weights, double offset) {
  rate::PathFunctional f;
  f.name = std::move(name);
  f.value = [weights, offset](const sde::ExplosivePath& p) {
    if (p.exploded()) return std::numeric_limits<double>::quiet_NaN();
    return weights.dot(p.state(p.grid_size() - 1)) - offset;
  };
  f.gradient = [weights](const sde::ExplosivePath& p) {
    std::vector<Vec> g(p.n_alive(), Vec::Zero(weights.size()));
    if (!p.exploded()) g.back() = weights;
    return g;
  };
  return f;
}

// sup_t |g_i(t) - g_i(0)|; gradient is the subgradient at the maximizing node.
rate::PathFunctional running_max_functional(std::size_t coord, std::size_t dim) {
  rate::PathFunctional f;
  f.name = "running_max";
  f.value = [coord](const sde::ExplosivePath& p) {
    if (p.exploded()) return std::numeric_limits<double>::quiet_NaN();
    const double base = p.state(0)[Eigen::Index(coord)];
    double m = 0.0;
    for (const auto& s : p.states()) m = std::max(m, std::abs(s[Eigen::Index(coord)] - base));
    return m;
  };
  f.gradient = [coord, dim](const sde::ExplosivePath& p) {
    std::vector<Vec> g(p.n_alive(), Vec::Zero(Eigen::Index(dim)));
    if (p.exploded()) return g;
    const double base = p.state(0)[Eigen::Index(coord)];
    std::size_t arg = 0;
    double m = -1.0;
    for (std::size_t n = 0; n < p.n_alive(); ++n) {
      const double v = std::abs(p.state(n)[Eigen::Index(coord)] - base);
      if (v > m) {
        m = v;
        arg = n;
      }
    }
    if (arg > 0) {
      const double s = p.state(arg)[Eigen::Index(coord)] - base >= 0.0 ? 1.0 : -1.0;
      g[arg][Eigen::Index(coord)] = s;
    }
    return g;
  };
  return f;
}

Vec unit(std::size_t d, std::size_t i) {
  Vec e = Vec::Zero(Eigen::Index(d));
  e[Eigen::Index(i)] = 1.0;
  return e;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Mat shift_matrix(std::size_t d) {
  Mat a = Mat::Zero(Eigen::Index(d), Eigen::Index(d));
  for (std::size_t i = 0; i + 1 < d; ++i) a(Eigen::Index(i), Eigen::Index(i + 1)) = 1.0;
  return a;
}

void set_boxes(ExampleSystem& ex, const Vec& center) {
  ex.box_lo = center.array() - 1.0;
  ex.box_hi = center.array() + 1.0;
  ex.probe_box_lo = center.array() - 10.0;
  ex.probe_box_hi = center.array() + 10.0;
}

ExampleSystem make_brownian(int d) {
  require(d >= 1, "brownian: dimension must be positive");
  const auto n = std::size_t(d);
  ExampleSystem ex;
  ex.name = "brownian";
  ex.params = {{"d", d}};
  ex.sde = sde::make_linear_system(Mat::Zero(d, d), Mat::Identity(d, d), "brownian");
  ex.x0 = Vec::Zero(d);
  ex.contraction = ContractionFamily::diagonal(n);
  ex.index = AsymptoticIndex(std::vector<IndexExponent>(n, {1, 1}));
  ex.limit_problem.drift = [d](const Vec&) -> Vec { return Vec::Zero(d); };
  ex.limit_problem.diffusion = [d](const Vec&) -> Mat { return Mat::Identity(d, d); };
  ex.limit_problem.constant_diffusion = Mat::Identity(d, d);
  ex.limit_problem.drift_jacobian = [d](const Vec&) -> Mat { return Mat::Zero(d, d); };
  ex.limit_problem.driftless.assign(n, true);
  ex.limit_problem.x0 = ex.x0;
  ex.functionals["terminal"] = terminal_functional("terminal", unit(n, 0), 0.0);
  ex.functionals["running_max"] = running_max_functional(0, n);
  ex.default_functional = "terminal";
  const double m = std::numbers::sqrt2;
  ex.reference_constants = {{"terminal.M", m, "closed form: sup f(1) over the energy ball"},
                            {"terminal.m", -m, "odd functional"},
                            {"running_max.M", m, "closed form: sup_t |f(t)| attained at t = 1"},
                            {"running_max.m", 0.0, "zero control"}};
  set_boxes(ex, ex.x0);
  return ex;
}

ExampleSystem make_iterated_kolmogorov(int d) {
  require(d >= 2, "iterated_kolmogorov: d must be at least 2");
  const auto n = std::size_t(d);
  ExampleSystem ex;
  ex.name = "iterated_kolmogorov";
  ex.params = {{"d", d}};
  const Mat a = shift_matrix(n);
  const Mat g = unit(n, n - 1);
  ex.sde = sde::make_linear_system(a, g, "iterated_kolmogorov(" + std::to_string(d) + ")");
  ex.x0 = Vec::Zero(d);
  ex.contraction = ContractionFamily::diagonal(n);
  std::vector<IndexExponent> e;
  for (int i = 1; i <= d; ++i) e.push_back({2 * (d - i) + 1, 1});
  ex.index = AsymptoticIndex(e);
  ex.limit_problem.drift = [a](const Vec& y) -> Vec { return a * y; };
  ex.limit_problem.diffusion = [g](const Vec&) -> Mat { return g; };
  ex.limit_problem.constant_diffusion = g;
  ex.limit_problem.drift_jacobian = [a](const Vec&) -> Mat { return a; };
  ex.limit_problem.driftless.assign(n, false);
  ex.limit_problem.driftless.back() = true;
  ex.limit_problem.x0 = ex.x0;
  ex.functionals["J1"] = terminal_functional("J1", unit(n, 0), 0.0);
  ex.functionals["terminal"] = terminal_functional("terminal", unit(n, 0), 0.0);
  ex.default_functional = "J1";
  const double m = std::sqrt(2.0 / (2.0 * d - 1.0)) / factorial(d - 1);
  ex.reference_constants = {{"J1.M", m, "closed form: Cauchy-Schwarz on the integrated kernel"},
                            {"J1.m", -m, "odd functional"},
                            {"terminal.M", m, "same as J1"},
                            {"terminal.m", -m, "same as J1"}};
  if (d == 2) {
    ex.functionals["running_max"] = running_max_functional(0, n);
    ex.reference_constants.push_back({"running_max.M", std::sqrt(2.0 / 3.0), "closed form: maximum at t = 1"});
    ex.reference_constants.push_back({"running_max.m", 0.0, "zero control"});
  }
  set_boxes(ex, ex.x0);
  return ex;
}

ExampleSystem make_shifted_kolmogorov(const ExampleParams& p) {
  const Vec x0 = p.x0 ? *p.x0 : Vec((Vec(2) << 0.0, 1.0).finished());
  require(x0.size() == 2 && x0.allFinite(), "shifted_kolmogorov: x0 must be a finite 2-vector");
  ExampleSystem ex;
  ex.name = "shifted_kolmogorov";
  ex.params = {{"x0", std::vector<double>{x0[0], x0[1]}}};
  const Mat a = shift_matrix(2);
  const Mat g = unit(2, 1);
  ex.sde = sde::make_linear_system(a, g, "shifted_kolmogorov");
  ex.x0 = x0;
  const Vec v = (Vec(2) << x0[1], 0.0).finished();
  ex.contraction = ContractionFamily::affine_detrended(x0, v);
  ex.index = AsymptoticIndex({{3, 1}, {1, 1}});
  ex.limit_problem.drift = [](const Vec& y) -> Vec { return (Vec(2) << y[1], 0.0).finished(); };
  ex.limit_problem.diffusion = [g](const Vec&) -> Mat { return g; };
  ex.limit_problem.constant_diffusion = g;
  ex.limit_problem.drift_jacobian = [a](const Vec&) -> Mat { return a; };
  ex.limit_problem.driftless = {false, true};
  ex.limit_problem.x0 = x0;
  ex.functionals["J1"] = terminal_functional("J1", unit(2, 0), x0[0] + x0[1]);
  ex.functionals["terminal"] = ex.functionals["J1"];
  ex.default_functional = "J1";
  const double m = std::sqrt(2.0 / 3.0);
  ex.reference_constants = {{"J1.M", m, "same limit functional as iterated_kolmogorov(2)"},
                            {"J1.m", -m, "odd functional"},
                            {"terminal.M", m, "same as J1"},
                            {"terminal.m", -m, "same as J1"}};
  set_boxes(ex, ex.x0);
  return ex;
}

ExampleSystem make_quadratic() {
  ExampleSystem ex;
  ex.name = "quadratic";
  ex.params = nlohmann::json::object();
  const Mat g = unit(2, 1);
  ex.sde.dim_state = 2;
  ex.sde.dim_noise = 1;
  ex.sde.label = "quadratic";
  ex.sde.drift = [](const Vec& x) -> Vec {
    return (Vec(2) << x[0] * x[0] - x[1] * x[1], 2.0 * x[0] * x[1]).finished();
  };
  ex.sde.diffusion = [g](const Vec&) -> Mat { return g; };
  ex.x0 = Vec::Zero(2);
  ex.contraction = ContractionFamily::diagonal(2);
  ex.index = AsymptoticIndex({{4, 2}, {1, 1}});
  ex.limit_problem.drift = [](const Vec& y) -> Vec { return (Vec(2) << -y[1] * y[1], 0.0).finished(); };
  ex.limit_problem.diffusion = [g](const Vec&) -> Mat { return g; };
  ex.limit_problem.constant_diffusion = g;
  ex.limit_problem.drift_jacobian = [](const Vec& y) -> Mat {
    return (Mat(2, 2) << 0.0, -2.0 * y[1], 0.0, 0.0).finished();
  };
  ex.limit_problem.driftless = {false, true};
  ex.limit_problem.x0 = ex.x0;
  ex.functionals["J2"] = terminal_functional("J2", unit(2, 0), 0.0);
  ex.functionals["terminal"] = ex.functionals["J2"];
  ex.default_functional = "J2";
  const double m = -8.0 / (std::numbers::pi * std::numbers::pi);
  ex.reference_constants = {{"J2.M", 0.0, "attained at the zero control"},
                            {"J2.m", m, "smallest eigenvalue of -f'' on [0,1], f(0)=0, f'(1)=0"},
                            {"terminal.M", 0.0, "same as J2"},
                            {"terminal.m", m, "same as J2"}};
  set_boxes(ex, ex.x0);
  return ex;
}

ExampleSystem make_lorenz96() {
  ExampleSystem ex;
  ex.name = "lorenz96";
  ex.params = {{"d", 5}};
  Mat g = Mat::Zero(5, 2);
  g(0, 0) = 1.0;
  g(1, 1) = 1.0;
  ex.sde.dim_state = 5;
  ex.sde.dim_noise = 2;
  ex.sde.label = "lorenz96";
  ex.sde.drift = [](const Vec& x) -> Vec {
    Vec b(5);
    for (int i = 0; i < 5; ++i) {
      const int ip1 = (i + 1) % 5, im1 = (i + 4) % 5, im2 = (i + 3) % 5;
      b[i] = (x[ip1] - x[im2]) * x[im1] - x[i];
    }
    return b;
  };
  ex.sde.diffusion = [g](const Vec&) -> Mat { return g; };
  ex.x0 = Vec::Zero(5);
  ex.contraction = ContractionFamily::diagonal(5);
  ex.index = AsymptoticIndex({{1, 1}, {1, 1}, {4, 2}, {7, 3}, {10, 4}});
  ex.limit_problem.drift = [](const Vec& y) -> Vec {
    return (Vec(5) << 0.0, 0.0, -y[0] * y[1], -y[1] * y[2], y[0] * y[3]).finished();
  };
  ex.limit_problem.diffusion = [g](const Vec&) -> Mat { return g; };
  ex.limit_problem.constant_diffusion = g;
  ex.limit_problem.drift_jacobian = [](const Vec& y) -> Mat {
    Mat j = Mat::Zero(5, 5);
    j(2, 0) = -y[1];
    j(2, 1) = -y[0];
    j(3, 1) = -y[2];
    j(3, 2) = -y[1];
    j(4, 0) = y[3];
    j(4, 3) = y[0];
    return j;
  };
  ex.limit_problem.driftless = {true, true, false, false, false};
  ex.limit_problem.x0 = ex.x0;
  ex.functionals["J3"] = terminal_functional("J3", unit(5, 4), 0.0);
  ex.functionals["terminal"] = ex.functionals["J3"];
  ex.default_functional = "J3";
  // (sin 5t, sin t) scaled onto the energy ball: s^4 * J3 with s^2 = 1 / energy.
  ex.reference_constants = {{"J3.m_upper_bound", -1.537e-4, "feasible point (sin 5t, sin t) scaled to energy 1"},
                            {"J3.M_lower_bound", 0.0, "positive for fdot = (1, 1)"}};
  set_boxes(ex, ex.x0);
  return ex;
}

nlohmann::json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

const rate::PathFunctional& ExampleSystem::functional(const std::string& fname) const {
  const auto it = functionals.find(fname);
  if (it == functionals.end()) throw UnknownName("example '" + name + "' has no functional '" + fname + "'");
  return it->second;
}

std::optional<double> ExampleSystem::constant(const std::string& cname) const {
  for (const auto& c : reference_constants)
    if (c.name == cname) return c.value;
  return std::nullopt;
}

scaling::TransformedCoefficients ExampleSystem::coefficients(double eps, double t) const {
  return scaling::transformed_coefficients_at(sde, contraction, index, eps, t);
}

nlohmann::json ExampleSystem::descriptor() const {
  nlohmann::json j;
  j["name"] = name;
  j["params"] = params;
  j["dim_state"] = sde.dim_state;
  j["dim_noise"] = sde.dim_noise;
  j["linear"] = sde.linear.has_value();
  j["x0"] = vec_json(x0);
  j["contraction"] = {{"kind", std::string(scaling::contraction_kind_name(contraction.kind()))},
                      {"center", vec_json(contraction.center())},
                      {"drift_vector", vec_json(contraction.drift_vector())}};
  nlohmann::json idx = nlohmann::json::array();
  for (const auto& e : index.exponents()) idx.push_back({{"ell", e.ell}, {"k", e.k}});
  j["index"] = {{"exponents", idx}, {"eps_star", index.eps_star()}};
  j["t_star"] = limit_problem.t_star;
  j["probe_box"] = {{"lo", vec_json(probe_box_lo)}, {"hi", vec_json(probe_box_hi)}};
  nlohmann::json fs = nlohmann::json::array();
  for (const auto& [k, v] : functionals) fs.push_back(k);
  j["functionals"] = fs;
  j["default_functional"] = default_functional;
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : reference_constants)
    cs.push_back({{"name", c.name}, {"value", c.value}, {"provenance", c.provenance}});
  j["reference_constants"] = cs;
  return j;
}

std::vector<std::string> example_names() {
  return {"brownian", "iterated_kolmogorov", "shifted_kolmogorov", "quadratic", "lorenz96"};
}

ExampleSystem get_example(const std::string& name, const ExampleParams& params) {
  if (name == "brownian") return make_brownian(params.d.value_or(1));
  if (name == "iterated_kolmogorov") return make_iterated_kolmogorov(params.d.value_or(2));
  if (name == "shifted_kolmogorov") return make_shifted_kolmogorov(params);
  if (name == "quadratic") return make_quadratic();
  if (name == "lorenz96") return make_lorenz96();
  throw UnknownName("unknown example '" + name + "'");
}

std::vector<DeviationRow> coefficient_deviation_table(const ExampleSystem& example, const std::vector<double>& eps_list,
                                                      std::size_t points_per_axis) {
  require(points_per_axis >= 2, "coefficient_deviation_table: need at least two points per axis");
  const auto d = Eigen::Index(example.sde.dim_state);
  std::size_t total = 1;
  for (Eigen::Index i = 0; i < d; ++i) total *= points_per_axis;
  std::vector<Vec> points;
  points.reserve(total);
  for (std::size_t c = 0; c < total; ++c) {
    Vec y(d);
    std::size_t r = c;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double w = double(r % points_per_axis) / double(points_per_axis - 1);
      r /= points_per_axis;
      y[i] = example.box_lo[i] + w * (example.box_hi[i] - example.box_lo[i]);
    }
    points.push_back(std::move(y));
  }
  const std::vector<double> times = example.contraction.time_dependent() ? std::vector<double>{0.0, 0.5, 1.0}
                                                                         : std::vector<double>{0.0};
  std::vector<DeviationRow> rows;
  for (double eps : eps_list) {
    DeviationRow row;
    row.eps = eps;
    for (double t : times) {
      const auto co = example.coefficients(eps, t);
      for (const auto& y : points) {
        const Vec db = co.rate_system.drift(y) - example.limit_problem.drift(y);
        const Mat ds = co.rate_system.diffusion(y) - example.limit_problem.sigma(y);
        row.drift_deviation = std::max(row.drift_deviation, db.cwiseAbs().maxCoeff());
        row.diffusion_deviation = std::max(row.diffusion_deviation, ds.cwiseAbs().maxCoeff());
      }
    }
    rows.push_back(row);
  }
  return rows;
}

bool deviation_decreasing(const std::vector<DeviationRow>& rows, double floor) {
  auto ok = [floor](double prev, double next) { return prev <= floor ? next <= floor : next < prev; };
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!ok(rows[i - 1].drift_deviation, rows[i].drift_deviation)) return false;
    if (!ok(rows[i - 1].diffusion_deviation, rows[i].diffusion_deviation)) return false;
  }
  return true;
}

}  // namespace lillab::examples
