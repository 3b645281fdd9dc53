#include "lillab/sde/path_io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "lillab/error.hpp"

namespace lillab::sde {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void write_csv(const ExplosivePath& path, std::ostream& os) {
  os << "t";
  for (std::size_t i = 0; i < path.dim(); ++i) os << ",x" << (i + 1);
  os << ",exploded\n";
  for (std::size_t n = 0; n < path.grid_size(); ++n) {
    os << format_double(path.time(n));
    const bool alive = path.alive_at_index(n);
    for (std::size_t i = 0; i < path.dim(); ++i) {
      os << ',';
      if (alive) os << format_double(path.state(n)[Eigen::Index(i)]);
    }
    os << ',' << (alive ? 0 : 1) << '\n';
  }
}

nlohmann::json to_json(const ExplosivePath& path) {
  nlohmann::json j;
  j["dt"] = path.dt();
  j["grid_size"] = path.grid_size();
  nlohmann::json times = nlohmann::json::array();
  for (std::size_t n = 0; n < path.grid_size(); ++n) times.push_back(path.time(n));
  j["times"] = std::move(times);
  nlohmann::json states = nlohmann::json::array();
  for (const auto& s : path.states()) states.push_back(std::vector<double>(s.data(), s.data() + s.size()));
  j["states"] = std::move(states);
  if (path.explosion_index())
    j["explosion_index"] = *path.explosion_index();
  else
    j["explosion_index"] = nullptr;
  return j;
}

ExplosivePath path_from_json(const nlohmann::json& j) {
  try {
    std::vector<Vec> states;
    for (const auto& row : j.at("states")) {
      const auto v = row.get<std::vector<double>>();
      states.push_back(Eigen::Map<const Vec>(v.data(), Eigen::Index(v.size())));
    }
    std::optional<std::size_t> ex;
    if (!j.at("explosion_index").is_null()) ex = j.at("explosion_index").get<std::size_t>();
    return ExplosivePath(j.at("dt").get<double>(), j.at("grid_size").get<std::size_t>(), std::move(states), ex);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("path json: ") + e.what());
  }
}

}  // namespace lillab::sde
