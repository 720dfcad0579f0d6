#include "gaussmatch/ot/proxy.hpp"

#include "gaussmatch/ot/solvers.hpp"

namespace gaussmatch::ot {

ProxyResult gaussian_proxy_wp(const EmpiricalSample& sample, double p, int multiplier, Stream& stream) {
  require(multiplier >= 4, "gaussian_proxy_wp: multiplier must be >= 4");
  require(sample.size() > 0, "gaussian_proxy_wp: empty sample");
  const std::size_t n = sample.size();
  const std::size_t m = n * static_cast<std::size_t>(multiplier);
  check_dense_size(n, m, "gaussian_proxy_wp");
  EmpiricalSample reference = sample_gaussian(m, sample.dim(), stream);
  const TransportResult r = solve_general_ot(DiscreteMeasure::uniform(sample.points),
                                             DiscreteMeasure::uniform(std::move(reference.points)), p);
  return {r.cost, multiplier, m, r.diagnostics.iterations};
}

}  // namespace gaussmatch::ot
