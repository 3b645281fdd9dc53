#include "lillab/random/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "lillab/error.hpp"
#include "lillab/simd/kernels.hpp"
#include "lillab/simd/philox.hpp"

namespace lillab::random {

double to_unit_interval(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((std::uint64_t(hi) << 32) | lo) >> 11;
  return (double(bits) + 0.5) * 0x1.0p-53;
}

void box_muller(double u1, double u2, double& z0, double& z1) {
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  z0 = r * std::cos(a);
  z1 = r * std::sin(a);
}

GaussianStream::GaussianStream(std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t k = simd::splitmix64(seed ^ simd::splitmix64(stream + 0x5851F42D4C957F2Dull));
  key0_ = std::uint32_t(k);
  key1_ = std::uint32_t(k >> 32);
}

namespace {

simd::PhiloxBlock block_for(std::uint32_t k0, std::uint32_t k1, std::uint64_t lane, std::uint64_t block) {
  return simd::philox4x32(
      {std::uint32_t(block), std::uint32_t(block >> 32), std::uint32_t(lane), std::uint32_t(lane >> 32)}, k0, k1);
}

}  // namespace

double GaussianStream::normal(std::uint64_t lane, std::uint64_t index) const {
  const auto r = block_for(key0_, key1_, lane, index / 2);
  double z0, z1;
  box_muller(to_unit_interval(r[0], r[1]), to_unit_interval(r[2], r[3]), z0, z1);
  return (index % 2 == 0) ? z0 : z1;
}

void GaussianStream::normals(std::uint64_t lane, std::uint64_t first_index, std::span<double> out) const {
  std::size_t i = 0;
  std::uint64_t index = first_index;
  if (index % 2 == 1 && i < out.size()) {
    out[i++] = normal(lane, index++);
  }
  for (; i + 2 <= out.size(); i += 2, index += 2) {
    const auto r = block_for(key0_, key1_, lane, index / 2);
    box_muller(to_unit_interval(r[0], r[1]), to_unit_interval(r[2], r[3]), out[i], out[i + 1]);
  }
  if (i < out.size()) out[i] = normal(lane, index);
}

double GaussianStream::uniform(std::uint64_t lane, std::uint64_t index) const {
  // Upper half of the block address space keeps uniforms disjoint from normals.
  const auto r = block_for(key0_, key1_, lane, index | (std::uint64_t(1) << 63));
  return to_unit_interval(r[0], r[1]);
}

void GaussianStream::lane_pair(std::uint64_t block, std::uint64_t lane_begin, std::span<double> even,
                               std::span<double> odd) const {
  if (even.size() != odd.size()) throw InvalidInput("lane_pair: output sizes differ");
  const std::size_t n = even.size();
  thread_local std::vector<std::uint32_t> words;
  words.resize(4 * n);
  simd::philox_lanes(key0_, key1_, block, lane_begin, n, words.data());
  for (std::size_t i = 0; i < n; ++i) {
    box_muller(to_unit_interval(words[i], words[n + i]), to_unit_interval(words[2 * n + i], words[3 * n + i]),
               even[i], odd[i]);
  }
}

}  // namespace lillab::random
