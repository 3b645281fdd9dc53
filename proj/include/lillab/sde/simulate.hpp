#pragma once

#include <string_view>

#include "lillab/sde/noise.hpp"
#include "lillab/sde/path.hpp"
#include "lillab/sde/system.hpp"

namespace lillab::sde {

enum class Scheme { euler, exact_linear };

Scheme parse_scheme(std::string_view name);
std::string_view scheme_name(Scheme scheme);

// Path on [0, horizon] with the noise grid; explosion at the first grid
// point outside the domain.
ExplosivePath simulate_sde(const SdeSystem& system, const Vec& x0, const NoisePath& noise, double horizon,
                           Scheme scheme);

}  // namespace lillab::sde
