#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lillab/error.hpp"
#include "lillab/examples/registry.hpp"
#include "lillab/rate/cramer.hpp"
#include "lillab/rate/limit_set.hpp"
#include "lillab/rate/optimizer.hpp"
#include "lillab/rate/oracle.hpp"
#include "lillab/sde/distance.hpp"
#include "oracles.hpp"

using namespace lillab;
using rate::ControlGrid;

namespace {

rate::LimitOdeProblem zero_problem(std::size_t d, std::size_t k) {
  rate::LimitOdeProblem p;
  p.drift = [d](const Vec&) -> Vec { return Vec::Zero(Eigen::Index(d)); };
  p.diffusion = [d, k](const Vec&) -> Mat { return Mat::Zero(Eigen::Index(d), Eigen::Index(k)); };
  p.x0 = Vec::LinSpaced(Eigen::Index(d), 1.0, 2.0);
  return p;
}

ControlGrid constant_control(std::size_t n, double v) {
  return ControlGrid::from_derivative([v](double) { return Vec::Constant(1, v); }, n, 1);
}

sde::ExplosivePath path_from(const std::function<Vec(double)>& g, double dt, std::size_t n) {
  std::vector<Vec> st;
  for (std::size_t i = 0; i < n; ++i) st.push_back(g(dt * double(i)));
  return sde::ExplosivePath(dt, n, st, std::nullopt);
}

// int_0^1 k(s) g_1(s) ds by the trapezoid rule on the path nodes.
rate::PathFunctional kernel_functional(std::function<double(double)> k) {
  rate::PathFunctional f;
  f.name = "kernel";
  f.value = [k](const sde::ExplosivePath& g) {
    if (g.exploded()) return std::nan("");
    double acc = 0.0;
    const std::size_t n = g.grid_size();
    for (std::size_t i = 0; i < n; ++i) {
      const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
      acc += w * k(g.time(i)) * g.state(i)[0];
    }
    return acc * g.dt();
  };
  f.gradient = [k](const sde::ExplosivePath& g) {
    std::vector<Vec> out;
    const std::size_t n = g.grid_size();
    for (std::size_t i = 0; i < n; ++i) {
      const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
      out.push_back(Vec::Constant(1, w * k(g.time(i)) * g.dt()));
    }
    return out;
  };
  return f;
}

double l2_distance(const ControlGrid& a, const ControlGrid& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) s += std::pow(a.values()[i] - b.values()[i], 2);
  return std::sqrt(s / double(a.n_steps()));
}

}  // namespace

TEST(ControlOde, ZeroDynamicsConstant) {
  const auto p = zero_problem(3, 2);
  const auto g = rate::solve_control_ode(p, rate::random_control(64, 2, 4, 1, 0, 1.0));
  for (const auto& x : g.states()) EXPECT_EQ(x, p.x0);
}

TEST(ControlOde, KolmogorovUnitControl) {
  const auto ex = examples::get_example("iterated_kolmogorov", {.d = 2});
  const auto g = rate::solve_control_ode(ex.limit_problem, constant_control(128, 1.0));
  for (std::size_t i = 0; i < g.grid_size(); i += 16) {
    const double t = g.time(i);
    EXPECT_NEAR(g.state(i)[0], 0.5 * t * t, 1e-14);
    EXPECT_NEAR(g.state(i)[1], t, 1e-14);
  }
}

TEST(ControlOde, QuadraticUnitControl) {
  const auto ex = examples::get_example("quadratic");
  const auto g = rate::solve_control_ode(ex.limit_problem, constant_control(128, 1.0));
  for (std::size_t i = 0; i < g.grid_size(); i += 16) {
    const double t = g.time(i);
    EXPECT_NEAR(g.state(i)[0], -t * t * t / 3.0, 1e-13);
    EXPECT_NEAR(g.state(i)[1], t, 1e-14);
  }
}

TEST(ControlOde, ExplosionLeavesDomain) {
  auto ex = examples::get_example("iterated_kolmogorov", {.d = 2});
  ex.limit_problem.domain_contains = [](const Vec& y) { return y[1] < 0.5; };
  const auto g = rate::solve_control_ode(ex.limit_problem, constant_control(100, 1.0));
  ASSERT_TRUE(g.exploded());
  EXPECT_NEAR(g.explosion_time(), 0.5, 0.011);
  EXPECT_FALSE(g.at(0.75).has_value());
}

TEST(Cramer, ConstantPathAtRest) {
  const auto ex = examples::get_example("iterated_kolmogorov", {.d = 2});
  const auto g = path_from([](double) { return Vec(Vec::Zero(2)); }, 1e-3, 1001);
  EXPECT_EQ(rate::cramer_transform(ex.limit_problem, g, 1e-6).value, 0.0);
}

TEST(Cramer, KolmogorovParabola) {
  const auto ex = examples::get_example("iterated_kolmogorov", {.d = 2});
  const auto g = path_from([](double t) { return Vec((Vec(2) << 0.5 * t * t, t).finished()); }, 1e-3, 1001);
  const auto r = rate::cramer_transform(ex.limit_problem, g, 1e-6);
  EXPECT_NEAR(r.value, 0.5, 1e-9);
  EXPECT_FALSE(r.borderline);
}

TEST(Cramer, InfeasiblePathIsInfinite) {
  const auto ex = examples::get_example("iterated_kolmogorov", {.d = 2});
  const auto g = path_from([](double t) { return Vec((Vec(2) << t, t).finished()); }, 1e-3, 1001);
  EXPECT_TRUE(std::isinf(rate::cramer_transform(ex.limit_problem, g, 1e-6).value));
}

TEST(Cramer, DimensionMismatchRejected) {
  const auto ex = examples::get_example("iterated_kolmogorov", {.d = 2});
  const auto g = path_from([](double) { return Vec(Vec::Zero(3)); }, 0.1, 11);
  EXPECT_THROW(rate::cramer_transform(ex.limit_problem, g, 1e-6), InvalidInput);
}

TEST(Cramer, BoundedByControlEnergy) {
  for (const char* name : {"iterated_kolmogorov", "quadratic", "brownian", "lorenz96"}) {
    const auto ex = examples::get_example(name);
    const std::size_t k = ex.limit_problem.dim_noise();
    for (std::uint64_t lane = 0; lane < 10; ++lane) {
      const auto u = rate::random_control(512, k, 6, 99, lane, 0.2 + 0.08 * double(lane));
      const auto g = rate::solve_control_ode(ex.limit_problem, u);
      const double lam = rate::cramer_transform(ex.limit_problem, g, 1e-4).value;
      EXPECT_LE(lam, u.energy() + 1e-6) << name;
      // Every example has sigma of full column rank, so the recovery is exact.
      EXPECT_NEAR(lam, u.energy(), 1e-6) << name;
    }
  }
}

TEST(Projection, FeasibleAndIdempotent) {
  for (std::uint64_t lane = 0; lane < 20; ++lane) {
    const auto u = rate::random_control(100, 3, 5, 4, lane, 0.1 + 0.4 * double(lane));
    const auto p = rate::project_energy_ball(u);
    EXPECT_LE(p.energy(), 1.0);
    const auto q = rate::project_energy_ball(p);
    EXPECT_TRUE(std::equal(p.values().begin(), p.values().end(), q.values().begin()));
    if (u.energy() <= 1.0) EXPECT_TRUE(std::equal(p.values().begin(), p.values().end(), u.values().begin()));
  }
}

TEST(LinearKernelOracle, Examples) {
  EXPECT_NEAR(rate::linear_kernel_oracle([](double) { return 1.0; }, 1025), std::sqrt(2.0 / 3.0), 1e-10);
  for (int d = 2; d <= 5; ++d) {
    const double fact = oracle::factorial(d - 2);
    const double v = rate::linear_kernel_oracle([&](double s) { return std::pow(1.0 - s, d - 2) / fact; }, 2049);
    EXPECT_NEAR(v, oracle::ik_max(d), 1e-10) << d;
  }
  EXPECT_EQ(rate::linear_kernel_oracle([](double) { return 0.0; }, 128), 0.0);
  EXPECT_THROW(rate::linear_kernel_oracle([](double) { return 1.0; }, 64), InvalidInput);
}

TEST(LinearKernelOracle, BrownianTerminalValue) {
  // sup f(1) over the energy ball: a point mass at s = 1 gives K = 1, so sqrt(2).
  const auto ex = examples::get_example("brownian");
  rate::OptimizerConfig cfg;
  cfg.n_steps = 256;
  cfg.restarts = 2;
  const auto r = rate::optimize_extremal(ex.limit_problem, ex.functional("terminal"), rate::Sense::maximize, cfg);
  EXPECT_NEAR(r.value, std::numbers::sqrt2, 1e-6);
}

TEST(Optimizer, MatchesKernelOracle) {
  const auto ex = examples::get_example("brownian");
  const auto k = [](double s) { return std::cos(3.0 * s) + 0.5; };
  rate::OptimizerConfig cfg;
  cfg.restarts = 4;
  const auto r = rate::optimize_extremal(ex.limit_problem, kernel_functional(k), rate::Sense::maximize, cfg);
  const double ref = rate::linear_kernel_oracle(k, 4097);
  EXPECT_NEAR(r.value / ref, 1.0, 1e-3);
  EXPECT_LE(r.argext.energy(), 1.0 + 1e-9);
  EXPECT_NEAR(rate::evaluate_control(ex.limit_problem, kernel_functional(k), r.argext), r.value, 1e-10);
}

TEST(Optimizer, OddFunctionalHasMirroredExtremals) {
  const auto ex = examples::get_example("iterated_kolmogorov", {.d = 2});
  rate::OptimizerConfig cfg;
  cfg.n_steps = 256;
  cfg.restarts = 4;
  const auto hi = rate::optimize_extremal(ex.limit_problem, ex.functional("J1"), rate::Sense::maximize, cfg);
  const auto lo = rate::optimize_extremal(ex.limit_problem, ex.functional("J1"), rate::Sense::minimize, cfg);
  EXPECT_LE(std::abs(hi.value + lo.value), 1e-6);
  ControlGrid neg = lo.argext;
  for (auto& v : neg.values()) v = -v;
  EXPECT_LE(l2_distance(hi.argext, neg), 1e-3);
  EXPECT_EQ(hi.restarts.size(), 4u);
  EXPECT_TRUE(hi.converged);
}

TEST(Optimizer, DeterministicAcrossThreadCounts) {
  const auto ex = examples::get_example("quadratic");
  rate::OptimizerConfig cfg;
  cfg.n_steps = 128;
  cfg.restarts = 6;
  cfg.threads = 1;
  const auto a = rate::optimize_extremal(ex.limit_problem, ex.functional("J2"), rate::Sense::minimize, cfg);
  cfg.threads = 3;
  const auto b = rate::optimize_extremal(ex.limit_problem, ex.functional("J2"), rate::Sense::minimize, cfg);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}

TEST(Optimizer, UndefinedEverywhereIsNonConvergence) {
  const auto ex = examples::get_example("brownian");
  rate::PathFunctional bad{"nan", [](const sde::ExplosivePath&) { return std::nan(""); }, {}};
  rate::OptimizerConfig cfg;
  cfg.n_steps = 16;
  cfg.restarts = 2;
  EXPECT_THROW(rate::optimize_extremal(ex.limit_problem, bad, rate::Sense::maximize, cfg), NonConvergence);
}

// Directional central differences: per-component perturbations move the path by
// O(dt) only and the truncation term drowns in roundoff. Along a full control
// the h^2 term dominates and halving h divides the error by 4.
TEST(Gradient, RichardsonRatio) {
  for (const char* name : {"lorenz96", "quadratic"}) {
    const auto ex = examples::get_example(name);
    const auto& fn = ex.functional(ex.default_functional);
    const std::size_t k = ex.limit_problem.dim_noise();
    const auto u = rate::random_control(64, k, 4, 5, 0, 1.0);
    const auto v = rate::random_control(64, k, 4, 5, 1, 1.0);
    auto along = [&](double h) {
      auto at = [&](double s) {
        ControlGrid c = u;
        for (std::size_t i = 0; i < c.values().size(); ++i) c.values()[i] += s * v.values()[i];
        return rate::evaluate_control(ex.limit_problem, fn, c);
      };
      return (at(h) - at(-h)) / (2.0 * h);
    };
    const double d1 = along(0.2), d2 = along(0.1), d3 = along(0.05);
    if (std::string(name) == "quadratic")
      EXPECT_NEAR(d1, d3, 1e-12);  // quadratic in u: central differences are exact
    else
      EXPECT_NEAR((d1 - d2) / (d2 - d3), 4.0, 0.1) << name;
  }
}

TEST(Gradient, AdjointMatchesFiniteDifferences) {
  for (const char* name : {"iterated_kolmogorov", "shifted_kolmogorov", "quadratic", "lorenz96", "brownian"}) {
    const auto ex = examples::get_example(name);
    for (const auto& [fname, fn] : ex.functionals) {
      if (fname == "running_max") continue;  // nonsmooth
      const auto u = rate::random_control(48, ex.limit_problem.dim_noise(), 4, 6, 1, 0.8);
      auto obj = [&](const ControlGrid& c) { return rate::evaluate_control(ex.limit_problem, fn, c); };
      const auto fd = rate::fd_gradient(obj, u, 1e-4);
      const auto adj = rate::objective_gradient(ex.limit_problem, fn, u, 1e-6);
      double err = 0, scale = 0;
      for (std::size_t i = 0; i < u.values().size(); ++i) {
        err = std::max(err, std::abs(fd.values()[i] - adj.values()[i]));
        scale = std::max(scale, std::abs(adj.values()[i]));
      }
      EXPECT_LE(err, 1e-7 * (1.0 + scale)) << name << " " << fname;
    }
  }
}

TEST(LimitSet, ZeroScaleGivesZeroControlPath) {
  const auto ex = examples::get_example("iterated_kolmogorov", {.d = 2});
  rate::LimitSetOptions opt;
  opt.scale_hi = 0.0;
  const auto s = rate::limit_set_sample(ex.limit_problem, 1, 3, opt);
  ASSERT_EQ(s.size(), 1u);
  const auto z = rate::solve_control_ode(ex.limit_problem, ControlGrid(opt.n_steps, 1));
  EXPECT_EQ(sde::path_distance(s[0], z, 1.0), 0.0);
}

TEST(LimitSet, SamplesHaveRateAtMostOne) {
  for (const char* name : {"iterated_kolmogorov", "quadratic", "lorenz96"}) {
    const auto ex = examples::get_example(name);
    // The trapezoid drift average leaves an O(h^2) out-of-range residual
    // (about 2e-5 at N = 256), so the range tolerance sits above it.
    for (const auto& s : rate::limit_set_sample(ex.limit_problem, 25, 8))
      EXPECT_LE(rate::cramer_transform(ex.limit_problem, s, 1e-4).value, 1.001) << name;
  }
}

TEST(LimitSet, KolmogorovStructure) {
  const auto ex = examples::get_example("iterated_kolmogorov", {.d = 2});
  for (const auto& s : rate::limit_set_sample(ex.limit_problem, 10, 2)) {
    for (std::size_t i = 0; i + 1 < s.grid_size(); ++i) {
      const double lhs = (s.state(i + 1)[0] - s.state(i)[0]) / s.dt();
      const double rhs = 0.5 * (s.state(i)[1] + s.state(i + 1)[1]);
      EXPECT_NEAR(lhs, rhs, 1e-10);
    }
  }
}

TEST(LimitSet, DistanceExamples) {
  const auto ex = examples::get_example("iterated_kolmogorov", {.d = 2});
  auto samples = rate::limit_set_sample(ex.limit_problem, 12, 4);
  EXPECT_EQ(rate::limit_set_distance(samples[3], samples, 1.0), 0.0);
  const auto origin = path_from([](double) { return Vec(Vec::Zero(2)); }, 0.1, 11);
  const auto one = path_from([](double) { return Vec((Vec(2) << 1.0, 0.0).finished()); }, 0.1, 11);
  EXPECT_DOUBLE_EQ(rate::limit_set_distance(one, {origin}, 1.0), 1.0);
  const auto probe = path_from([](double t) { return Vec((Vec(2) << 0.1 * t, 0.3).finished()); }, 0.01, 101);
  double prev = kInfinity;
  std::vector<sde::ExplosivePath> grow;
  for (const auto& s : samples) {
    grow.push_back(s);
    const double d = rate::limit_set_distance(probe, grow, 1.0);
    EXPECT_LE(d, prev);
    prev = d;
  }
}

TEST(LimitSet, ProbeHorizon) {
  const auto ex = examples::get_example("iterated_kolmogorov", {.d = 2});
  EXPECT_EQ(rate::probe_t_star(ex.limit_problem, ex.probe_box_lo, ex.probe_box_hi, 50, 1), 1.0);
  const Vec lo = Vec::Constant(2, -0.5), hi = Vec::Constant(2, 0.5);
  const double t = rate::probe_t_star(ex.limit_problem, lo, hi, 50, 1);
  EXPECT_GT(t, 0.0);
  EXPECT_LT(t, 1.0);
}
