#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lillab/rate/limit_ode.hpp"
#include "lillab/rate/optimizer.hpp"
#include "lillab/scaling/contraction.hpp"
#include "lillab/scaling/index.hpp"
#include "lillab/scaling/rescale.hpp"
#include "lillab/sde/system.hpp"

namespace lillab::examples {

struct ReferenceConstant {
  std::string name;  // "<functional>.M", "<functional>.m" or a bound
  double value = 0.0;
  std::string provenance;
};

struct ExampleParams {
  std::optional<int> d;   // iterated_kolmogorov (default 2), brownian (default 1)
  std::optional<Vec> x0;  // shifted_kolmogorov start (default (0, 1))
};

struct DeviationRow {
  double eps = 0.0;
  double drift_deviation = 0.0;
  double diffusion_deviation = 0.0;
};

struct ExampleSystem {
  std::string name;
  nlohmann::json params;
  sde::SdeSystem sde;
  Vec x0;
  scaling::ContractionFamily contraction = scaling::ContractionFamily::diagonal(1);
  scaling::AsymptoticIndex index{{{1, 1}}};
  rate::LimitOdeProblem limit_problem;
  std::map<std::string, rate::PathFunctional> functionals;
  std::vector<ReferenceConstant> reference_constants;
  std::string default_functional;
  Vec box_lo, box_hi;  // test box for the coefficient-convergence check
  Vec probe_box_lo, probe_box_hi;  // box L used to confirm t_star

  const rate::PathFunctional& functional(const std::string& name) const;
  std::optional<double> constant(const std::string& name) const;
  scaling::TransformedCoefficients coefficients(double eps, double t = 0.0) const;
  nlohmann::json descriptor() const;
};

std::vector<std::string> example_names();
ExampleSystem get_example(const std::string& name, const ExampleParams& params = {});

// Sup-deviation of (b_eps, sigma_eps) from the limit (b, sigma) over a
// deterministic grid of the example's test box (and t in {0, 1/2, 1} for
// time-dependent rescalings).
std::vector<DeviationRow> coefficient_deviation_table(const ExampleSystem& example, const std::vector<double>& eps_list,
                                                      std::size_t points_per_axis = 5);

// Non-increasing, and strictly decreasing wherever the deviation is above the
// roundoff floor (deviations below `floor` count as exact zeros).
bool deviation_decreasing(const std::vector<DeviationRow>& rows, double floor = 1e-13);

}  // namespace lillab::examples
