#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "gaussmatch/ot/solvers.hpp"

namespace gaussmatch::ot {

double brute_force_wp(const CostMatrix& cost) {
  const std::size_t n = cost.rows();
  if (n != cost.cols()) throw InvalidArgument("brute_force_wp: cost matrix must be square");
  if (n == 0 || n > 8) throw InvalidArgument("brute_force_wp: requires 1 <= n <= 8");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost(i, perm[i]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(n);
}

double brute_force_wp(const PointCloud& X, const PointCloud& Y, double p) {
  if (X.size() != Y.size()) throw InvalidArgument("brute_force_wp: sizes differ");
  return brute_force_wp(cost_matrix(X, Y, p));
}

double sorted_1d_wp(std::vector<double> x, std::vector<double> y, double p) {
  if (x.size() != y.size()) throw InvalidArgument("sorted_1d_wp: sizes differ");
  require(!x.empty(), "sorted_1d_wp: empty sample");
  require(p >= 1.0, "sorted_1d_wp: p >= 1");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double gap = std::abs(x[i] - y[i]);
    total += p == 1.0 ? gap : (p == 2.0 ? gap * gap : std::pow(gap, p));
  }
  return total / static_cast<double>(x.size());
}

double sorted_1d_wp(const PointCloud& X, const PointCloud& Y, double p) {
  if (X.dim() != 1 || Y.dim() != 1) throw DimensionMismatch("sorted_1d_wp: requires d = 1");
  return sorted_1d_wp(X.coords(), Y.coords(), p);
}

}  // namespace gaussmatch::ot
