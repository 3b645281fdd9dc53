// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lillab/cli/run.hpp"
#include "lillab/examples/functionals.hpp"
#include "lillab/examples/registry.hpp"
#include "lillab/lil/estimator.hpp"
#include "lillab/rate/cramer.hpp"
#include "lillab/rate/optimizer.hpp"
#include "lillab/rate/oracle.hpp"
#include "lillab/regularity/criteria.hpp"
#include "lillab/regularity/polygonalize.hpp"
#include "lillab/regularity/reach.hpp"
#include "lillab/scaling/rescale.hpp"
#include "lillab/sde/noise.hpp"
#include "lillab/sde/simulate.hpp"
#include "oracles.hpp"

using namespace lillab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  if (!o.pass) ++failures;
  std::printf("%s C%d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

void info(const std::string& line) {
  std::printf("     %s\n", line.c_str());
  std::fflush(stdout);
}

rate::OptimizerConfig paper_optimizer() {
  rate::OptimizerConfig c;
  c.n_steps = 1024;
  c.restarts = 16;
  c.threads = 0;
  return c;
}

// Extremal values computed once and shared between C2 and C3.
struct IkRun {
  int d;
  double oracle, max, min, t_max, t_min;
};
std::vector<IkRun> ik_runs;

Outcome c1_j3() {
  Outcome o;
  auto f1 = [](double t) { return std::sin(5.0 * t); };
  auto f2 = [](double t) { return std::sin(t); };
  const double ref = oracle::j3_by_ode(f1, f2);
  const auto t0 = Clock::now();
  const double v = examples::functional_value(examples::parse_functional("J3"),
                                              [&](double t) { return Vec((Vec(2) << f1(t), f2(t)).finished()); },
                                              10001);
  const double secs = seconds_since(t0);
  o.require(std::abs(v + 0.00605) <= 6e-5, fmt("J3 = %.6f vs -0.00605 +- 6e-5", v));
  o.require(std::abs(v - ref) <= 1e-7, fmt("ODE oracle %.8f", ref));
  o.require(secs < 1.0, fmt("%.3f s < 1 s", secs));
  return o;
}

Outcome c2_extremals() {
  Outcome o;
  // Oracles first: closed forms against independent numerics.
  for (int d = 2; d <= 5; ++d) {
    const double fact = oracle::factorial(d - 2);
    const double kern = rate::linear_kernel_oracle([&](double s) { return std::pow(1.0 - s, d - 2) / fact; }, 4097);
    o.require(std::abs(kern / oracle::ik_max(d) - 1.0) < 1e-9, fmt("oracle IK(%g) kernel/closed agree", d));
  }
  const double eig = oracle::quadratic_min_eigen();
  o.require(std::abs(eig / oracle::quadratic_min_closed_form - 1.0) < 1e-5,
            fmt("oracle eigensolve %.8f vs -8/pi^2", eig));

  const auto cfg = paper_optimizer();
  for (int d = 2; d <= 5; ++d) {
    const auto ex = examples::get_example("iterated_kolmogorov", {.d = d});
    const auto& fn = ex.functional("J1");
    auto t0 = Clock::now();
    const auto hi = rate::optimize_extremal(ex.limit_problem, fn, rate::Sense::maximize, cfg);
    const double t_hi = seconds_since(t0);
    t0 = Clock::now();
    const auto lo = rate::optimize_extremal(ex.limit_problem, fn, rate::Sense::minimize, cfg);
    const double t_lo = seconds_since(t0);
    ik_runs.push_back({d, oracle::ik_max(d), hi.value, lo.value, t_hi, t_lo});
    const double rel = std::abs(hi.value / oracle::ik_max(d) - 1.0);
    o.require(rel <= 1e-3 && t_hi < 30.0,
              fmt("IK(%g) M = %.8f", d, hi.value) + fmt(" rel err %.1e, %.1f s", rel, t_hi));
  }
  const auto q = examples::get_example("quadratic");
  const auto t0 = Clock::now();
  const auto m = rate::optimize_extremal(q.limit_problem, q.functional("J2"), rate::Sense::minimize, cfg);
  const double tq = seconds_since(t0);
  const double rel = std::abs(m.value / oracle::quadratic_min_closed_form - 1.0);
  o.require(rel <= 1e-3 && tq < 30.0, fmt("quadratic m = %.8f rel err %.1e, %.1f s", m.value, rel, tq));
  return o;
}

Outcome c3_oddness() {
  Outcome o;
  if (ik_runs.empty()) {
    o.require(false, "no IK runs from C2");
    return o;
  }
  for (const auto& r : ik_runs)
    o.require(std::abs(r.max + r.min) <= 1e-6, fmt("d=%g |M+m| = %.1e", r.d, std::abs(r.max + r.min)));
  return o;
}

Outcome c4_lorenz() {
  Outcome o;
  // Bound: (sin 5t, sin t) scaled onto the energy ball, J3 / energy^2.
  const double e = oracle::lorenz_feasible_energy();
  const double j3 = examples::functional_value(examples::parse_functional("J3"), [](double t) {
    return Vec((Vec(2) << std::sin(5.0 * t), std::sin(t)).finished());
  });
  info(fmt("feasible point gives m <= %.4e", j3 / (e * e)));
  const auto ex = examples::get_example("lorenz96");
  const auto cfg = paper_optimizer();
  const auto t0 = Clock::now();
  const auto hi = rate::optimize_extremal(ex.limit_problem, ex.functional("J3"), rate::Sense::maximize, cfg);
  const auto lo = rate::optimize_extremal(ex.limit_problem, ex.functional("J3"), rate::Sense::minimize, cfg);
  o.require(hi.value > 0.0, fmt("M = %.6e > 0", hi.value));
  o.require(lo.value <= -1.3e-4, fmt("m = %.6e <= -1.3e-4", lo.value));
  info(fmt("both senses in %.1f s", seconds_since(t0)));
  return o;
}

// Direct simulation of y^eps at step dt against the rescaled fine original path,
// both driven by the same underlying Brownian increments.
Outcome c5_pathwise() {
  Outcome o;
  const double eps = 1e-3, dt_fine = 1e-6;
  const std::vector<double> dts = {1e-2, 1e-3, 1e-4, 1e-5};
  const auto t0 = Clock::now();
  for (const char* name : {"iterated_kolmogorov", "quadratic"}) {
    const auto ex = examples::get_example(name);
    const std::size_t k = ex.sde.dim_noise;
    const auto fine = sde::brownian_path(4242, eps * dt_fine, eps, k);
    const auto x_ref = sde::simulate_sde(ex.sde, ex.x0, fine, eps, sde::Scheme::euler);
    const auto y_ref = scaling::rescale_path(x_ref, ex.contraction, ex.index, eps);
    const auto co = scaling::transformed_coefficients(ex.sde, ex.contraction, ex.index, eps);
    const auto sim = co.simulation_system();
    const Vec y0 = ex.contraction.apply(ex.index(eps), ex.x0);
    std::vector<double> diffs;
    for (double dt : dts) {
      const auto factor = std::size_t(std::llround(dt / dt_fine));
      const auto noise = fine.coarsened(factor).time_changed(eps);
      const auto y = sde::simulate_sde(sim, y0, noise, 1.0, sde::Scheme::euler);
      double sup = 0.0;
      for (std::size_t i = 0; i < y.grid_size(); ++i)
        sup = std::max(sup, (y.state(i) - y_ref.state(i * factor)).lpNorm<Eigen::Infinity>());
      diffs.push_back(sup);
    }
    // Least-squares slope of log(diff) against log(dt).
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < dts.size(); ++i) {
      mx += std::log(dts[i]);
      my += std::log(diffs[i]);
    }
    mx /= double(dts.size());
    my /= double(dts.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < dts.size(); ++i) {
      sxy += (std::log(dts[i]) - mx) * (std::log(diffs[i]) - my);
      sxx += std::pow(std::log(dts[i]) - mx, 2);
    }
    const double slope = sxy / sxx;
    bool decreasing = true;
    for (std::size_t i = 1; i < diffs.size(); ++i) decreasing = decreasing && diffs[i] < diffs[i - 1];
    info(std::string(name) + fmt(": sup-diff %.2e %.2e", diffs[0], diffs[1]) +
         fmt(" %.2e %.2e", diffs[2], diffs[3]));
    o.require(decreasing && slope >= 0.4, std::string(name) + fmt(" slope %.2f", slope));
  }
  const double secs = seconds_since(t0);
  o.require(secs < 60.0, fmt("%.1f s < 60 s", secs));
  return o;
}

Outcome c6_coefficients() {
  Outcome o;
  for (const auto& name : examples::example_names()) {
    const auto rows = examples::coefficient_deviation_table(examples::get_example(name), {1e-2, 1e-4, 1e-6, 1e-8});
    o.require(examples::deviation_decreasing(rows),
              name + fmt(" drift %.1e -> %.1e", rows.front().drift_deviation, rows.back().drift_deviation));
  }
  return o;
}

Outcome c7_cramer() {
  Outcome o;
  const auto ex = examples::get_example("iterated_kolmogorov", {.d = 2});
  double worst = 0.0;
  for (std::uint64_t lane = 0; lane < 100; ++lane) {
    const double energy = 0.01 + 0.99 * double(lane) / 99.0;
    const auto u = rate::random_control(1024, 1, 8, 7, lane, energy);
    const auto g = rate::solve_control_ode(ex.limit_problem, u);
    const auto r = rate::cramer_transform(ex.limit_problem, g, 1e-6);
    worst = std::max(worst, std::abs(r.value - u.energy()));
  }
  o.require(worst <= 1e-4, fmt("100 controls, max |lambda - energy| = %.1e", worst));
  std::vector<Vec> states;
  for (int i = 0; i <= 1000; ++i) states.push_back((Vec(2) << i * 1e-3, i * 1e-3).finished());
  const sde::ExplosivePath bad(1e-3, 1001, states, std::nullopt);
  o.require(std::isinf(rate::cramer_transform(ex.limit_problem, bad, 1e-6).value), "g = (t, t) gives inf");
  return o;
}

Outcome c8_lil() {
  Outcome o;
  const auto t0 = Clock::now();
  lil::LilExperimentConfig cfg;
  cfg.c = 0.5;
  cfg.eps0 = 1e-2;
  cfg.j_max = lil::LilExperimentConfig::depth_for(cfg.eps0, cfg.c, 1e-10);
  cfg.n_paths = 2000;
  cfg.scheme = sde::Scheme::exact_linear;
  cfg.seed = 2024;
  cfg.threads = 0;
  struct Case {
    const char* example;
    const char* functional;
    double lo, hi;
  };
  const double m_ik = oracle::ik_max(2);
  for (const Case& c : {Case{"brownian", "terminal", 1.0, 1.45}, Case{"iterated_kolmogorov", "J1", 0.4 * m_ik, 1.15 * m_ik}}) {
    const auto rep = lil::run_lil_experiment(examples::get_example(c.example), c.functional, cfg);
    const double agg = rep.mean_running_max.back();
    o.require(agg >= c.lo && agg <= c.hi, std::string(c.example) + fmt(" aggregate max %.4f in [%.3f, %.3f]", agg, c.lo, c.hi));
    bool monotone = true;
    for (Eigen::Index p = 0; p < rep.running_max.rows(); ++p)
      for (Eigen::Index s = 1; s < rep.running_max.cols(); ++s)
        monotone = monotone && rep.running_max(p, s) >= rep.running_max(p, s - 1);
    o.require(monotone, std::string(c.example) + " running max non-decreasing");
    info(std::string(c.example) + fmt(": envelope max %.4f, depth %g scales", rep.envelope_max.back(), double(rep.n_scales())) +
         (rep.bracket_flag ? " (bracket flag)" : ""));
  }
  const double secs = seconds_since(t0);
  o.require(secs < 300.0, fmt("%.1f s < 300 s", secs));
  return o;
}

Outcome c9_regularity() {
  Outcome o;
  const auto ex = examples::get_example("iterated_kolmogorov", {.d = 2});
  const double r = 1.0;
  const auto ball = regularity::ball_domain(Vec::Zero(2), r);
  std::size_t tested = 0, regular = 0;
  for (int i = 0; i < 360; ++i) {
    const double a = 2.0 * std::numbers::pi * (double(i) + 0.5) / 360.0;
    const Vec x = (Vec(2) << r * std::cos(a), r * std::sin(a)).finished();
    if (std::abs(std::sin(a)) <= 1e-6) continue;
    ++tested;
    if (regularity::sphere_criterion(ex.sde, ball, x).verdict == regularity::Verdict::regular) ++regular;
  }
  o.require(tested == 360 && regular == tested, fmt("regular at %g of %g boundary points", double(regular), double(tested)));
  for (double sgn : {1.0, -1.0}) {
    const Vec x = (Vec(2) << sgn * r, 0.0).finished();
    const auto v = regularity::sphere_criterion(ex.sde, ball, x).verdict;
    o.require(v == regularity::Verdict::inconclusive, fmt("(%+g r, 0) inconclusive", sgn));
  }
  const auto reach = regularity::reach_target(ex.limit_problem, (Vec(2) << 0.0, 10.0).finished(), 1.0);
  o.require(reach.verdict == regularity::ReachVerdict::unreachable && reach.certificate.has_value(),
            fmt("z2 = 10 unreachable at t = 1 (bound %.4f, best miss %.3f)",
                reach.certificate ? reach.certificate->bound : 0.0, reach.best_miss));
  return o;
}

Outcome c10_polygon() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto disc = regularity::ball_domain(Vec::Zero(2), 1.0);
  const regularity::BoundarySampler sampler(disc);
  const Vec v = (Vec(2) << 0.0, 1.0).finished();
  std::size_t parallel = 0, over = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto p = regularity::polygonalize(sampler, v, 64, seed);
    parallel += std::size_t(std::count_if(p.parallel_audit.begin(), p.parallel_audit.end(),
                                          [](double a) { return a <= 1e-12; }));
    if (p.volume > std::numbers::pi) ++over;
  }
  o.require(parallel == 0, fmt("parallel facets over 1000 seeds: %g", double(parallel)));
  o.require(over == 0, fmt("seeds with area > pi: %g", double(over)));
  std::vector<double> medians;
  for (std::size_t n : {8, 32, 128, 512}) {
    std::vector<double> d;
    for (std::uint64_t seed = 0; seed < 200; ++seed) d.push_back(regularity::polygonalize(sampler, v, n, seed).deficit);
    std::nth_element(d.begin(), d.begin() + 100, d.end());
    medians.push_back(d[100]);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < medians.size(); ++i) decreasing = decreasing && medians[i] < medians[i - 1];
  o.require(decreasing, fmt("median deficit %.3e %.3e %.3e", medians[0], medians[1], medians[2]) +
                            fmt(" %.3e", medians[3]));
  const double secs = seconds_since(t0);
  o.require(secs < 30.0, fmt("%.1f s < 30 s", secs));
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome c11_reproducible() {
  namespace fs = std::filesystem;
  Outcome o;
  const std::vector<std::vector<std::string>> commands = {
      {"simulate", "--example", "quadratic", "--seed", "11"},
      {"rescale", "--example", "iterated_kolmogorov", "--seed", "11"},
      {"optimize", "--example", "iterated_kolmogorov", "--n-steps", "128", "--restarts", "4", "--sense", "both"},
      {"lil-verify", "--example", "iterated_kolmogorov", "--paths", "200", "--seed", "11"},
      {"regularity", "polygonalize", "--domain", "ball", "--center", "0,0", "--seed", "11"},
      {"regularity", "reach", "--example", "iterated_kolmogorov", "--target", "0.5,1"},
      {"check", "--example", "quadratic"},
  };
  const fs::path dir = fs::temp_directory_path() / "lillab_acceptance_c11";
  std::size_t compared = 0;
  for (auto args : commands) {
    fs::remove_all(dir);
    args.insert(args.end(), {"--out", dir.string()});
    std::vector<std::map<std::string, std::string>> runs(2);
    for (auto& files : runs) {
      std::ostringstream out, err;
      if (cli::run(args, out, err) != 0) {
        o.require(false, args[0] + " exited nonzero: " + err.str());
        return o;
      }
      for (const auto& e : fs::directory_iterator(dir))
        if (e.path().filename() != "manifest.json") files[e.path().filename().string()] = slurp(e.path());
    }
    const bool same = runs[0] == runs[1] && !runs[0].empty();
    compared += runs[0].size();
    o.require(same, args[0] + (args[0] == "regularity" ? " " + args[1] : "") + (same ? " identical" : " differs"));
  }
  fs::remove_all(dir);
  o.require(compared > 0, fmt("%g data files compared", double(compared)));
  return o;
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  report(1, "J3 quadrature", c1_j3);
  report(2, "extremal constants vs oracles", c2_extremals);
  report(3, "oddness", c3_oddness);
  report(4, "Lorenz signs", c4_lorenz);
  report(5, "pathwise transform consistency", c5_pathwise);
  report(6, "coefficient convergence", c6_coefficients);
  report(7, "Cramer round trip", c7_cramer);
  report(8, "Monte Carlo LIL", c8_lil);
  report(9, "regularity verdicts", c9_regularity);
  report(10, "polygonalization", c10_polygon);
  report(11, "CLI reproducibility", c11_reproducible);
  std::printf("%d of 11 criteria failed (%.1f s)\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
