#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace lillab::rate {

// sup over {1/2 int |fdot|^2 <= 1} of int_0^1 k(s) f(s) ds, which equals
// sqrt(2) ||K||_2 with K(r) = int_r^1 k(s) ds. Composite Simpson on n_quad nodes.
double linear_kernel_oracle(const std::function<double(double)>& kernel, std::size_t n_quad);

// Running integral I_i = int_{x_0}^{x_i} f on a uniform grid of spacing h.
// Fourth-order: each interval uses the parabola through three nodes.
std::vector<double> cumulative_simpson(const std::vector<double>& f, double h);

// Composite Simpson for an odd node count (falls back to a 3/8 tail otherwise).
double simpson(const std::vector<double>& f, double h);

}  // namespace lillab::rate
