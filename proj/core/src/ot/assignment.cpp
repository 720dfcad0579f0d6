#include <cmath>
#include <limits>
#include <vector>

#include "gaussmatch/ot/solvers.hpp"

namespace gaussmatch::ot {

TransportResult solve_assignment(const CostMatrix& cost) {
  const std::size_t n = cost.rows();
  if (n != cost.cols()) throw InvalidArgument("solve_assignment: cost matrix must be square");
  require(n > 0, "solve_assignment: empty cost matrix");
  require(all_finite(cost.values()), "solve_assignment: non-finite cost");

  // 1-based: column 0 is a virtual column holding the row being inserted.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  long scans = 0;

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      const double* row = cost.row(i0 - 1);
      const double ui = u[i0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - ui - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
      ++scans;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  TransportResult r;
  r.solver = SolverTag::exact_assignment;
  r.permutation.assign(n, 0);
  double primal = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    r.permutation[match[j] - 1] = j - 1;
    primal += cost(match[j] - 1, j - 1);
  }
  double dual = 0.0;
  for (std::size_t k = 1; k <= n; ++k) dual += u[k] + v[k];
  r.cost = primal / static_cast<double>(n);
  r.diagnostics.iterations = scans;
  r.diagnostics.duality_gap = std::abs(primal - dual) / static_cast<double>(n);
  return r;
}

}  // namespace gaussmatch::ot
