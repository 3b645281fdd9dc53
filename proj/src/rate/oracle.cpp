#include "lillab/rate/oracle.hpp"

#include <cmath>

#include "lillab/error.hpp"

namespace lillab::rate {

std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
  require(f.size() >= 3, "cumulative_simpson: need at least three nodes");
  std::vector<double> out(f.size(), 0.0);
  const std::size_t n = f.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double piece;
    if (i + 2 < n)
      piece = h / 12.0 * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2]);
    else
      piece = h / 12.0 * (-f[i - 1] + 8.0 * f[i] + 5.0 * f[i + 1]);
    out[i + 1] = out[i] + piece;
  }
  return out;
}

double simpson(const std::vector<double>& f, double h) {
  require(f.size() >= 3, "simpson: need at least three nodes");
  const std::size_t n = f.size();
  std::size_t end = n;
  double tail = 0.0;
  if ((n - 1) % 2 == 1) {
    require(n >= 4, "simpson: need at least four nodes for an even interval count");
    tail = 3.0 * h / 8.0 * (f[n - 4] + 3.0 * f[n - 3] + 3.0 * f[n - 2] + f[n - 1]);
    end = n - 3;
  }
  double s = f[0] + f[end - 1];
  for (std::size_t i = 1; i + 1 < end; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  return s * h / 3.0 + tail;
}

double linear_kernel_oracle(const std::function<double(double)>& kernel, std::size_t n_quad) {
  require(n_quad >= 128, "linear_kernel_oracle: need at least 128 nodes");
  const std::size_t n = n_quad % 2 == 1 ? n_quad : n_quad + 1;
  const double h = 1.0 / double(n - 1);
  // K(r) = int_r^1 k: integrate the reversed kernel from 1 down to 0.
  std::vector<double> rev(n);
  for (std::size_t i = 0; i < n; ++i) rev[i] = kernel(1.0 - double(i) * h);
  const auto cum = cumulative_simpson(rev, h);
  std::vector<double> k2(n);
  for (std::size_t i = 0; i < n; ++i) k2[i] = cum[i] * cum[i];
  return std::sqrt(2.0 * simpson(k2, h));
}

}  // namespace lillab::rate
