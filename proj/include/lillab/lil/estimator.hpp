#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lillab/examples/registry.hpp"
#include "lillab/sde/simulate.hpp"

namespace lillab::lil {

struct LilExperimentConfig {
  double c = 0.5;
  long j_min = 0;
  long j_max = 27;
  double eps0 = 1e-2;
  std::size_t n_paths = 2000;
  sde::Scheme scheme = sde::Scheme::exact_linear;
  std::uint64_t seed = 0;
  std::size_t points_per_scale = 1;  // exact_linear: rescaled grid points on (0, 1]
  double dt_rel = 1.0 / 128.0;       // euler: per-scale step eps_j * dt_rel
  double explosion_threshold = 0.05;
  double soft_bracket_factor = 1.15;
  bool negate_noise = false;
  std::size_t threads = 1;
  std::size_t batch = 256;

  // Smallest j_max with eps0 * c^j_max <= eps_min.
  static long depth_for(double eps0, double c, double eps_min);
  nlohmann::json to_json() const;
};

struct LilReport {
  LilExperimentConfig config;
  std::string example;
  std::string functional;
  std::vector<long> j;
  std::vector<double> eps;
  // n_paths x n_scales; nan marks an exploded path at that scale.
  Mat values;
  Mat running_max;
  Mat running_min;
  // Across paths, per depth: max/min envelope and mean of per-path running extremes.
  std::vector<double> envelope_max, envelope_min;
  std::vector<double> mean_running_max, mean_running_min;
  std::optional<double> theoretical_max, theoretical_min;
  std::string max_provenance, min_provenance;
  std::size_t explosions = 0;
  double explosion_fraction = 0.0;
  bool explosion_flag = false;
  bool bracket_flag = false;
  bool single_omega = true;

  std::size_t n_paths() const { return std::size_t(values.rows()); }
  std::size_t n_scales() const { return std::size_t(values.cols()); }
  void write_csv(std::ostream& os) const;
  nlohmann::json to_json() const;
};

std::pair<std::vector<double>, std::vector<double>> running_extremes(const std::vector<double>& values);

LilReport run_lil_experiment(const examples::ExampleSystem& example, const std::string& functional_name,
                             const LilExperimentConfig& config);

}  // namespace lillab::lil
