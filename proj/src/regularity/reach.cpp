#include "lillab/regularity/reach.hpp"

#include <cmath>

#include "lillab/error.hpp"

namespace lillab::regularity {

std::string reach_verdict_name(ReachVerdict v) {
  switch (v) {
    case ReachVerdict::reachable: return "reachable";
    case ReachVerdict::unreachable: return "unreachable";
    default: return "indeterminate";
  }
}

nlohmann::json ReachReport::to_json(bool include_control) const {
  nlohmann::json j = {{"verdict", reach_verdict_name(verdict)},
                      {"best_miss", best_miss},
                      {"t", t},
                      {"target", sde::to_std(target)},
                      {"optimizer_converged", optimizer_converged}};
  if (certificate)
    j["certificate"] = {{"kind", "energy_bound"},
                        {"coordinate", certificate->coordinate},
                        {"bound", certificate->bound},
                        {"required", certificate->required}};
  else
    j["certificate"] = nullptr;
  if (include_control && control) {
    j["control_energy"] = control->energy();
    j["control"] = std::vector<double>(control->values().begin(), control->values().end());
  }
  return j;
}

std::optional<EnergyCertificate> energy_certificate(const rate::LimitOdeProblem& problem, const Vec& z, double t) {
  if (!problem.constant_diffusion || problem.driftless.size() != problem.dim_state()) return std::nullopt;
  const Mat& s = *problem.constant_diffusion;
  std::optional<EnergyCertificate> best;
  for (std::size_t i = 0; i < problem.dim_state(); ++i) {
    if (!problem.driftless[i]) continue;
    const Eigen::Index ii = Eigen::Index(i);
    const double bound = s.row(ii).norm() * std::sqrt(2.0 * t);
    const double req = std::abs(z[ii] - problem.x0[ii]);
    if (req > bound && (!best || req - bound > best->required - best->bound)) best = EnergyCertificate{i, bound, req};
  }
  return best;
}

ReachReport reach_target(const rate::LimitOdeProblem& problem, const Vec& z, double t, const ReachConfig& config) {
  problem.validate();
  require(std::size_t(z.size()) == problem.dim_state(), "reach_target: target has the wrong dimension");
  require(z.allFinite(), "reach_target: target must be finite");
  require(t > 0.0 && t <= problem.t_star, "reach_target: t must lie in (0, t_star]");
  ReachReport out;
  out.t = t;
  out.target = z;

  rate::LimitOdeProblem p = problem;
  p.t_star = t;
  rate::PathFunctional miss;
  miss.name = "terminal_miss";
  miss.value = [z](const sde::ExplosivePath& g) {
    if (g.exploded()) return std::nan("");
    return (g.state(g.n_alive() - 1) - z).squaredNorm();
  };
  miss.gradient = [z](const sde::ExplosivePath& g) {
    std::vector<Vec> grad(g.n_alive(), Vec::Zero(z.size()));
    grad.back() = 2.0 * (g.state(g.n_alive() - 1) - z);
    return grad;
  };

  const std::size_t k = p.dim_noise();
  rate::ControlGrid zero(config.optimizer.n_steps, k);
  const double zero_val = rate::evaluate_control(p, miss, zero);
  if (std::isfinite(zero_val) && std::sqrt(zero_val) < config.tolerance) {
    out.verdict = ReachVerdict::reachable;
    out.best_miss = std::sqrt(zero_val);
    out.control = zero;
    out.optimizer_converged = true;
    return out;
  }
  out.certificate = energy_certificate(p, z, t);
  const rate::ExtremalResult res = rate::optimize_extremal(p, miss, rate::Sense::minimize, config.optimizer);
  out.best_miss = std::sqrt(std::max(0.0, res.value));
  out.control = res.argext;
  out.optimizer_converged = res.converged;
  if (out.certificate)
    out.verdict = ReachVerdict::unreachable;
  else if (out.best_miss < config.tolerance)
    out.verdict = ReachVerdict::reachable;
  else
    out.verdict = res.converged ? ReachVerdict::unreachable : ReachVerdict::indeterminate;
  return out;
}

}  // namespace lillab::regularity
