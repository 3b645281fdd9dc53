#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace lillab::cli {

struct Settings {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool scalar = false;
  std::string out_dir = "lillab_out";
  std::vector<std::string> formats{"csv", "json"};

  std::string example = "iterated_kolmogorov";
  std::optional<int> d;
  std::vector<double> x0;

  double dt = 1e-3;
  double horizon = 1.0;
  std::string scheme = "euler";
  std::uint64_t path_index = 0;
  double eps = 1e-3;

  std::string functional;
  std::string sense = "max";
  std::size_t n_steps = 1024;
  std::size_t restarts = 16;
  std::size_t max_iterations = 2000;
  double tolerance = 1e-9;
  double initial_step = 1.0;
  std::size_t init_modes = 8;

  double c = 0.5;
  long j_min = 0;
  long j_max = 27;
  double eps0 = 1e-2;
  std::size_t paths = 2000;
  std::string lil_scheme = "exact_linear";
  std::size_t points_per_scale = 1;
  double dt_rel = 1.0 / 128.0;
  bool negate = false;

  std::string domain = "ball";
  std::vector<double> center;
  double radius = 1.0;
  std::vector<double> semi_axes;
  std::vector<double> point;
  std::vector<double> basis;
  double criterion_tolerance = 1e-9;
  std::vector<double> target;
  double reach_t = 1.0;
  double reach_tolerance = 1e-6;
  std::vector<double> direction;
  std::size_t samples = 64;
};

// Collects outputs so that the driver can write a manifest afterwards.
struct Context {
  Settings s;
  std::ostream* out = nullptr;
  std::vector<std::string> outputs;
  nlohmann::json summary;

  bool wants(const std::string& format) const;
  std::filesystem::path file(const std::string& name);
  void write_json(const std::string& name, const nlohmann::json& j);
  void write_text(const std::string& name, const std::function<void(std::ostream&)>& writer);
};

// Registers all subcommands; the returned map is keyed by "name" or "parent child".
std::map<std::string, std::function<void(Context&)>> register_commands(CLI::App& app, Settings& s);

}  // namespace lillab::cli
