#include "lillab/sde/system.hpp"

#include "lillab/error.hpp"
#include "lillab/random/gaussian.hpp"

namespace lillab::sde {

std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

bool SdeSystem::contains(const Vec& x) const {
  if (!x.allFinite()) return false;
  return !domain_contains || domain_contains(x);
}

Vec SdeSystem::eval_drift(const Vec& x) const {
  Vec b = drift(x);
  if (std::size_t(b.size()) != dim_state) throw InvalidInput(label + ": drift has wrong dimension");
  if (!b.allFinite()) throw NumericalFailure(label + ": non-finite drift", to_std(x));
  return b;
}

Mat SdeSystem::eval_diffusion(const Vec& x) const {
  Mat s = diffusion(x);
  if (std::size_t(s.rows()) != dim_state || std::size_t(s.cols()) != dim_noise)
    throw InvalidInput(label + ": diffusion has wrong shape");
  if (!s.allFinite()) throw NumericalFailure(label + ": non-finite diffusion", to_std(x));
  return s;
}

SdeSystem make_linear_system(const Mat& a, const Mat& g, std::string label) {
  require(a.rows() == a.cols(), "linear system: drift matrix must be square");
  require(g.rows() == a.rows(), "linear system: diffusion rows must match state dimension");
  SdeSystem s;
  s.dim_state = std::size_t(a.rows());
  s.dim_noise = std::size_t(g.cols());
  s.drift = [a](const Vec& x) -> Vec { return a * x; };
  s.diffusion = [g](const Vec&) -> Mat { return g; };
  s.label = std::move(label);
  s.linear = LinearStructure{a, g};
  return s;
}

SystemCheck check_system(const SdeSystem& system, const Vec& lo, const Vec& hi, std::size_t n_samples,
                         std::uint64_t seed) {
  require(std::size_t(lo.size()) == system.dim_state && std::size_t(hi.size()) == system.dim_state,
          "check_system: box dimension mismatch");
  SystemCheck report;
  random::GaussianStream stream(seed, random::kStreamSampling);
  Vec x(lo.size());
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double u = stream.uniform(s, std::uint64_t(i));
      x[i] = lo[i] + u * (hi[i] - lo[i]);
    }
    if (!system.contains(x)) continue;
    ++report.samples_in_domain;
    try {
      system.eval_drift(x);
      system.eval_diffusion(x);
    } catch (const Error& e) {
      report.ok = false;
      report.offending_state = x;
      report.message = e.what();
      return report;
    }
  }
  return report;
}

}  // namespace lillab::sde
