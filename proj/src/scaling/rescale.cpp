#include "lillab/scaling/rescale.hpp"

#include <cmath>

#include "lillab/error.hpp"

namespace lillab::scaling {

sde::ExplosivePath rescale_path(const sde::ExplosivePath& path, const ContractionFamily& phi,
                                const AsymptoticIndex& psi, double eps, double t_horizon) {
  require(t_horizon > 0.0, "rescale_path: horizon must be positive");
  require(path.dim() == phi.dim() && phi.dim() == psi.dim(), "rescale_path: dimension mismatch");
  const Vec alpha = psi(eps);
  const double dt_out = path.dt() / eps;
  const auto steps = std::size_t(std::ceil(t_horizon / dt_out - 1e-9));
  require(steps + 1 <= path.grid_size(), "rescale_path: path horizon shorter than eps * t_horizon");
  std::vector<Vec> states;
  std::optional<std::size_t> explosion;
  for (std::size_t i = 0; i <= steps; ++i) {
    if (!path.alive_at_index(i)) {
      explosion = i;
      break;
    }
    states.push_back(phi.apply(alpha, path.state(i), eps, dt_out * double(i)));
  }
  return sde::ExplosivePath(dt_out, steps + 1, std::move(states), explosion);
}

sde::SdeSystem TransformedCoefficients::simulation_system() const {
  sde::SdeSystem s = rate_system;
  const double c = noise_scale;
  auto base = rate_system.diffusion;
  s.diffusion = [base, c](const Vec& y) -> Mat { return base(y) * c; };
  if (s.linear) s.linear->diffusion *= c;
  s.label = rate_system.label + " (simulation)";
  return s;
}

TransformedCoefficients transformed_coefficients(const sde::SdeSystem& system, const ContractionFamily& phi,
                                                 const AsymptoticIndex& psi, double eps) {
  if (phi.kind() == ContractionKind::affine_detrended)
    throw InvalidInput("transformed_coefficients: affine_detrended contractions are time dependent");
  return transformed_coefficients_at(system, phi, psi, eps, 0.0);
}

TransformedCoefficients transformed_coefficients_at(const sde::SdeSystem& system, const ContractionFamily& phi,
                                                    const AsymptoticIndex& psi, double eps, double t) {
  require(system.dim_state == phi.dim() && phi.dim() == psi.dim(), "transformed_coefficients: dimension mismatch");
  const Vec alpha = psi(eps);
  const Vec dphi = alpha.cwiseInverse();
  const double r = loglog(eps);
  const double sig_scale = std::sqrt(eps * r);
  const Vec v = phi.drift_vector();
  const bool detrended = phi.time_dependent();

  TransformedCoefficients out;
  out.eps = eps;
  out.noise_scale = 1.0 / std::sqrt(r);
  sde::SdeSystem& s = out.rate_system;
  s.dim_state = system.dim_state;
  s.dim_noise = system.dim_noise;
  s.label = system.label + " rescaled";
  auto inv = [phi, alpha, eps, t](const Vec& y) { return phi.invert(alpha, y, eps, t); };
  auto drift = system.drift;
  auto diffusion = system.diffusion;
  if (detrended && system.linear) {
    // Closed form: going through x = Phi^{-1} y and back cancels catastrophically
    // once the index is tiny. With u = y - c - t v,
    //   b_eps(y) = v + eps D (A (c + eps t v) - v) + eps D A D^{-1} u.
    const Mat& a = system.linear->drift_matrix;
    const Vec c = phi.center();
    Mat m(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) m(i, j) = (eps * dphi[i]) * a(i, j) * alpha[j];
    const Vec k = v + eps * dphi.cwiseProduct(a * (c + eps * t * v) - v);
    s.drift = [m, k, c, v, t](const Vec& y) -> Vec { return k + m * (y - c - t * v); };
  } else
    s.drift = [inv, drift, dphi, eps, v, detrended](const Vec& y) -> Vec {
    const Vec x = inv(y);
    if (!detrended) return eps * dphi.cwiseProduct(drift(x));
    return v + eps * dphi.cwiseProduct(drift(x) - v);
  };
  s.diffusion = [inv, diffusion, dphi, sig_scale](const Vec& y) -> Mat {
    return sig_scale * (dphi.asDiagonal() * diffusion(inv(y)));
  };
  auto domain = system.domain_contains;
  if (domain) s.domain_contains = [inv, domain](const Vec& y) { return domain(inv(y)); };
  if (system.linear && !phi.time_dependent() && phi.center().isZero(0.0)) {
    // y = D x: A_eps = eps D A D^{-1}, G_eps = sqrt(eps r) D G.
    const Mat d = dphi.asDiagonal();
    const Mat dinv = alpha.asDiagonal();
    s.linear = sde::LinearStructure{eps * d * system.linear->drift_matrix * dinv,
                                    sig_scale * d * system.linear->diffusion};
  }
  return out;
}

}  // namespace lillab::scaling
