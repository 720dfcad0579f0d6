#pragma once

#include "gaussmatch/ot/measure.hpp"
#include "gaussmatch/rng.hpp"
#include "gaussmatch/sampling.hpp"

namespace gaussmatch::ot {

struct ProxyResult {
  double cost = 0.0;  // W_p^p(mu_n, nu_m)
  int multiplier = 0;
  std::size_t reference_size = 0;
  long pivots = 0;
};

/// Stand-in for W_p^p(mu_n, mu): exact OT from the sample (weights 1/n) to a
/// fresh Gaussian reference sample of size multiplier * n (weights 1/m).
/// Throws ResourceLimitError when the dense n x m problem exceeds the cap.
ProxyResult gaussian_proxy_wp(const EmpiricalSample& sample, double p, int multiplier, Stream& stream);

}  // namespace gaussmatch::ot
