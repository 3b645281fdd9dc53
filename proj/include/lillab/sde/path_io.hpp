#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "lillab/sde/path.hpp"

namespace lillab::sde {

// Shortest round-trip decimal representation (locale independent).
std::string format_double(double v);

// Columns t, x1..xd, exploded. Rows at or after the explosion carry empty state cells.
void write_csv(const ExplosivePath& path, std::ostream& os);
nlohmann::json to_json(const ExplosivePath& path);
ExplosivePath path_from_json(const nlohmann::json& j);

}  // namespace lillab::sde
