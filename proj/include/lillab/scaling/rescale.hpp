#pragma once

#include "lillab/scaling/contraction.hpp"
#include "lillab/scaling/index.hpp"
#include "lillab/sde/path.hpp"
#include "lillab/sde/system.hpp"

namespace lillab::scaling {

// y_t = Phi_{psi(eps)}(x_{eps t}) on [0, t_horizon]. The output grid is the
// input grid divided by eps, so no interpolation is involved.
sde::ExplosivePath rescale_path(const sde::ExplosivePath& path, const ContractionFamily& phi,
                                const AsymptoticIndex& psi, double eps, double t_horizon = 1.0);

// Rescaled coefficients (b_eps, sigma_eps); the rescaled process solves
// dy = b_eps dt + sigma_eps / sqrt(r(eps)) dB^eps.
struct TransformedCoefficients {
  sde::SdeSystem rate_system;  // (b_eps, sigma_eps)
  double noise_scale = 1.0;    // 1 / sqrt(r(eps))
  double eps = 0.0;

  // (b_eps, sigma_eps / sqrt(r)) ready for simulate_sde with B^eps noise.
  sde::SdeSystem simulation_system() const;
};

// Rejects the affine-detrended kind.
TransformedCoefficients transformed_coefficients(const sde::SdeSystem& system, const ContractionFamily& phi,
                                                 const AsymptoticIndex& psi, double eps);

// Coefficients at rescaled time t; also handles the affine-detrended kind,
// where b_eps(t, y) = v + eps D (b(Phi_t^{-1} y) - v).
TransformedCoefficients transformed_coefficients_at(const sde::SdeSystem& system, const ContractionFamily& phi,
                                                    const AsymptoticIndex& psi, double eps, double t);

}  // namespace lillab::scaling
