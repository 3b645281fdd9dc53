#include "lillab/rate/limit_ode.hpp"

#include <cmath>

#include "lillab/error.hpp"

namespace lillab::rate {

std::size_t LimitOdeProblem::dim_noise() const {
  if (constant_diffusion) return std::size_t(constant_diffusion->cols());
  return std::size_t(diffusion(x0).cols());
}

bool LimitOdeProblem::contains(const Vec& x) const {
  if (!x.allFinite()) return false;
  return !domain_contains || domain_contains(x);
}

Mat LimitOdeProblem::sigma(const Vec& x) const {
  if (constant_diffusion) return *constant_diffusion;
  Mat s = diffusion(x);
  if (!s.allFinite()) throw NumericalFailure("limit ode: non-finite diffusion", sde::to_std(x));
  return s;
}

Vec LimitOdeProblem::field(const Vec& x, const Vec& u) const {
  Vec b = drift(x);
  if (std::size_t(b.size()) != dim_state()) throw InvalidInput("limit ode: drift has wrong dimension");
  if (!b.allFinite()) throw NumericalFailure("limit ode: non-finite drift", sde::to_std(x));
  if (constant_diffusion)
    b.noalias() += *constant_diffusion * u;
  else
    b += sigma(x) * u;
  return b;
}

void LimitOdeProblem::validate() const {
  require(x0.size() >= 1, "limit ode: empty initial state");
  require(t_star > 0.0 && t_star <= 1.0, "limit ode: t_star must lie in (0, 1]");
  require(bool(drift), "limit ode: drift callback missing");
  require(bool(diffusion) || constant_diffusion.has_value(), "limit ode: diffusion missing");
  require(contains(x0), "limit ode: x0 outside the domain");
  const Mat s = sigma(x0);
  require(std::size_t(s.rows()) == dim_state(), "limit ode: diffusion rows must equal d");
  require(driftless.empty() || driftless.size() == dim_state(), "limit ode: driftless mask has wrong size");
}

std::size_t horizon_steps(const LimitOdeProblem& problem, const ControlGrid& control) {
  const auto steps = std::size_t(std::ceil(problem.t_star * double(control.n_steps()) - 1e-9));
  return std::max<std::size_t>(1, std::min(steps, control.n_steps()));
}

sde::ExplosivePath solve_control_ode(const LimitOdeProblem& problem, const ControlGrid& control) {
  problem.validate();
  require(control.dim() == problem.dim_noise(), "solve_control_ode: control dimension mismatch");
  const std::size_t steps = horizon_steps(problem, control);
  const double h = control.h();
  std::vector<Vec> states;
  states.reserve(steps + 1);
  states.push_back(problem.x0);
  std::optional<std::size_t> explosion;
  Vec g = problem.x0;
  for (std::size_t n = 0; n < steps; ++n) {
    const Vec u = control.step_vec(n);
    const Vec k1 = problem.field(g, u);
    const Vec k2 = problem.field(g + 0.5 * h * k1, u);
    const Vec k3 = problem.field(g + 0.5 * h * k2, u);
    const Vec k4 = problem.field(g + h * k3, u);
    g += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!problem.contains(g)) {
      explosion = n + 1;
      break;
    }
    states.push_back(g);
  }
  return sde::ExplosivePath(h, steps + 1, std::move(states), explosion);
}

namespace {

// J^T w where J = d/dx [b(x) + sigma(x) u].
Vec field_vjp(const LimitOdeProblem& p, const Vec& x, const Vec& u, const Vec& w) {
  if (p.drift_jacobian && p.constant_diffusion) return p.drift_jacobian(x).transpose() * w;
  const Eigen::Index d = x.size();
  Vec out(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double step = 1e-6 * std::max(1.0, std::abs(x[i]));
    Vec xp = x, xm = x;
    xp[i] += step;
    xm[i] -= step;
    out[i] = w.dot(p.field(xp, u) - p.field(xm, u)) / (2.0 * step);
  }
  return out;
}

}  // namespace

ControlGrid control_gradient(const LimitOdeProblem& problem, const ControlGrid& control,
                             const sde::ExplosivePath& path, const std::vector<Vec>& node_gradient) {
  const std::size_t alive = path.n_alive();
  require(node_gradient.size() == alive, "control_gradient: one gradient per alive node required");
  const double h = control.h();
  ControlGrid grad(control.n_steps(), control.dim());
  Vec lambda = node_gradient[alive - 1];
  // Past the explosion the objective no longer depends on the control.
  for (std::size_t n = alive - 1; n-- > 0;) {
    const Vec& g = path.state(n);
    const Vec u = control.step_vec(n);
    const Vec k1 = problem.field(g, u);
    const Vec p2 = g + 0.5 * h * k1;
    const Vec k2 = problem.field(p2, u);
    const Vec p3 = g + 0.5 * h * k2;
    const Vec k3 = problem.field(p3, u);
    const Vec p4 = g + h * k3;

    Vec kb4 = (h / 6.0) * lambda;
    Vec kb3 = (h / 3.0) * lambda;
    Vec kb2 = (h / 3.0) * lambda;
    Vec kb1 = (h / 6.0) * lambda;
    Vec gb = lambda;
    Vec ub = Vec::Zero(Eigen::Index(control.dim()));

    Vec pb = field_vjp(problem, p4, u, kb4);
    ub += problem.sigma(p4).transpose() * kb4;
    gb += pb;
    kb3 += h * pb;
    pb = field_vjp(problem, p3, u, kb3);
    ub += problem.sigma(p3).transpose() * kb3;
    gb += pb;
    kb2 += 0.5 * h * pb;
    pb = field_vjp(problem, p2, u, kb2);
    ub += problem.sigma(p2).transpose() * kb2;
    gb += pb;
    kb1 += 0.5 * h * pb;
    pb = field_vjp(problem, g, u, kb1);
    ub += problem.sigma(g).transpose() * kb1;
    gb += pb;

    for (std::size_t i = 0; i < control.dim(); ++i) grad.step(n)[i] = ub[Eigen::Index(i)];
    lambda = gb + node_gradient[n];
  }
  return grad;
}

}  // namespace lillab::rate
