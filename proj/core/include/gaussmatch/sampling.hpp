#pragma once

#include <cstdint>

#include "gaussmatch/common.hpp"
#include "gaussmatch/rng.hpp"

namespace gaussmatch {

/// A sample X_1..X_n from the standard Gaussian, with the key of the stream it
/// came from. Localized samples also record the truncation radius.
struct EmpiricalSample {
  PointCloud points;
  std::uint64_t stream_key = 0;
  bool localized = false;
  double radius = 0.0;
  int resampled = 0;

  std::size_t size() const noexcept { return points.size(); }
  std::size_t dim() const noexcept { return points.dim(); }
};

/// n i.i.d. N(0, I_d) points.
EmpiricalSample sample_gaussian(std::size_t n, std::size_t d, Stream& stream);

/// One draw from mu restricted to the ball of radius R, by rejection.
/// Throws std::runtime_error after `max_tries` rejections.
void sample_restricted_gaussian(std::span<double> out, double R, Stream& stream, int max_tries = 1000000);

}  // namespace gaussmatch
