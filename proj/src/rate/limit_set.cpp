#include "lillab/rate/limit_set.hpp"

#include <algorithm>
#include <cmath>

#include "lillab/error.hpp"
#include "lillab/random/gaussian.hpp"
#include "lillab/rate/optimizer.hpp"
#include "lillab/sde/distance.hpp"
#include "lillab/simd/kernels.hpp"

namespace lillab::rate {

std::vector<LimitSetSample> limit_set_sample_with_controls(const LimitOdeProblem& problem, std::size_t n_samples,
                                                           std::uint64_t seed, const LimitSetOptions& options) {
  require(n_samples >= 1, "limit_set_sample: need at least one sample");
  require(options.scale_lo >= 0.0 && options.scale_hi <= 1.0 && options.scale_lo <= options.scale_hi,
          "limit_set_sample: scale range must lie in [0, 1]");
  random::GaussianStream uniforms(seed, random::kStreamSampling);
  std::vector<LimitSetSample> out;
  out.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double s = options.scale_lo + (options.scale_hi - options.scale_lo) * (1.0 - uniforms.uniform(i, 0));
    ControlGrid u = random_control(options.n_steps, problem.dim_noise(), options.modes, seed, i, 1.0);
    simd::scale(s, u.values());
    auto path = solve_control_ode(problem, u);
    out.push_back({std::move(u), std::move(path)});
  }
  return out;
}

std::vector<sde::ExplosivePath> limit_set_sample(const LimitOdeProblem& problem, std::size_t n_samples,
                                                 std::uint64_t seed, const LimitSetOptions& options) {
  std::vector<sde::ExplosivePath> out;
  for (auto& s : limit_set_sample_with_controls(problem, n_samples, seed, options)) out.push_back(std::move(s.path));
  return out;
}

double limit_set_distance(const sde::ExplosivePath& path, const std::vector<sde::ExplosivePath>& samples, double s) {
  require(!samples.empty(), "limit_set_distance: empty sample collection");
  double best = kInfinity;
  for (const auto& q : samples) best = std::min(best, sde::path_distance(path, q, s));
  return best;
}

double probe_t_star(const LimitOdeProblem& problem, const Vec& lo, const Vec& hi, std::size_t n_samples,
                    std::uint64_t seed, std::size_t max_halvings) {
  require(lo.size() == problem.x0.size() && hi.size() == problem.x0.size(), "probe_t_star: box dimension mismatch");
  LimitOdeProblem full = problem;
  full.t_star = 1.0;
  const auto samples = limit_set_sample(full, n_samples, seed);
  auto inside = [&](const Vec& x) { return (x.array() > lo.array()).all() && (x.array() < hi.array()).all(); };
  double t = 1.0;
  for (std::size_t h = 0; h <= max_halvings; ++h, t *= 0.5) {
    bool ok = true;
    for (const auto& p : samples) {
      const auto last = std::size_t(std::floor(t / p.dt() + 1e-9));
      if (last >= p.n_alive()) {
        ok = false;
        break;
      }
      for (std::size_t i = 0; i <= last && ok; ++i) ok = inside(p.state(i));
      if (!ok) break;
    }
    if (ok) return t;
  }
  return 0.0;
}

}  // namespace lillab::rate
