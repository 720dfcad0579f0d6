#include "gaussmatch/sampling.hpp"

#include <stdexcept>

#include "gaussmatch/special.hpp"

namespace gaussmatch {

double Stream::normal() { return normal_quantile(uniform()); }

EmpiricalSample sample_gaussian(std::size_t n, std::size_t d, Stream& stream) {
  require(n >= 1 && d >= 1, "sample_gaussian: need n >= 1 and d >= 1");
  EmpiricalSample s;
  s.stream_key = stream.key();
  std::vector<double> coords(n * d);
  for (double& c : coords) c = stream.normal();
  s.points = PointCloud(d, std::move(coords));
  return s;
}

void sample_restricted_gaussian(std::span<double> out, double R, Stream& stream, int max_tries) {
  require(R > 0.0, "sample_restricted_gaussian: R > 0");
  const double r2 = R * R;
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    double norm2 = 0.0;
    for (double& c : out) {
      c = stream.normal();
      norm2 += c * c;
    }
    if (norm2 < r2) return;
  }
  throw std::runtime_error("sample_restricted_gaussian: rejection sampler exceeded its retry cap");
}

}  // namespace gaussmatch
