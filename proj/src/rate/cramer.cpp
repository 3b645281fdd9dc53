#include "lillab/rate/cramer.hpp"

#include <cmath>

#include "lillab/error.hpp"

namespace lillab::rate {

CramerResult cramer_transform(const LimitOdeProblem& problem, const sde::ExplosivePath& path, double tolerance) {
  require(path.dim() == problem.dim_state(), "cramer_transform: path and problem dimensions differ");
  require(tolerance > 0.0, "cramer_transform: tolerance must be positive");
  require((path.state(0) - problem.x0).norm() <= 1e-12 * (1.0 + problem.x0.norm()),
          "cramer_transform: path does not start at x0");
  const double h = path.dt();
  const std::size_t k = problem.dim_noise();
  const std::size_t steps = path.grid_size() - 1;
  CramerResult out;
  out.recovered_control.assign(steps, Vec::Zero(Eigen::Index(k)));
  double energy = 0.0;
  const std::size_t alive_steps = path.n_alive() - 1;
  for (std::size_t n = 0; n < alive_steps; ++n) {
    const Vec& a = path.state(n);
    const Vec& b = path.state(n + 1);
    const Vec bbar = 0.5 * (problem.drift(a) + problem.drift(b));
    const Mat sbar = 0.5 * (problem.sigma(a) + problem.sigma(b));
    const Vec rhs = (b - a) / h - bbar;
    if (!rhs.allFinite()) throw NumericalFailure("cramer_transform: non-finite residual", sde::to_std(a));
    const Eigen::CompleteOrthogonalDecomposition<Mat> cod(sbar);
    const Vec f = cod.solve(rhs);
    const double residual = (sbar * f - rhs).cwiseAbs().maxCoeff();
    out.max_residual = std::max(out.max_residual, residual);
    out.recovered_control[n] = f;
    energy += 0.5 * f.squaredNorm() * h;
  }
  out.borderline = out.max_residual > 0.1 * tolerance && out.max_residual < 10.0 * tolerance;
  out.value = out.max_residual > tolerance ? kInfinity : energy;
  return out;
}

}  // namespace lillab::rate
