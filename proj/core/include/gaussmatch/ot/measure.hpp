#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaussmatch/common.hpp"

namespace gaussmatch::ot {

/// Weighted point set. Weights are nonnegative and sum to 1.
struct DiscreteMeasure {
  PointCloud points;
  std::vector<double> weights;

  static DiscreteMeasure uniform(PointCloud points);

  std::size_t size() const noexcept { return points.size(); }
  std::size_t dim() const noexcept { return points.dim(); }
  bool is_uniform() const;
  /// Throws InvalidArgument on length mismatch, negative or non-normalized weights.
  void validate() const;
};

/// Dense matrices above this many entries are refused.
inline constexpr std::size_t kMaxDenseEntries = std::size_t{1} << 31;

/// Row-major dense cost matrix.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
  const double* row(std::size_t i) const { return values_.data() + i * cols_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> values_;
};

/// Throws ResourceLimitError if rows * cols exceeds kMaxDenseEntries.
void check_dense_size(std::size_t rows, std::size_t cols, const char* what);

/// Entry (i, j) = |x_i - y_j|^p.
CostMatrix cost_matrix(const PointCloud& X, const PointCloud& Y, double p);
inline CostMatrix cost_matrix(const DiscreteMeasure& X, const DiscreteMeasure& Y, double p) {
  return cost_matrix(X.points, Y.points, p);
}

/// |x - y|^p with the exact square for p = 2.
double pow_distance(std::span<const double> x, std::span<const double> y, double p);

enum class SolverTag { exact_assignment, general_exact, sinkhorn, sorted_1d, brute_force };
std::string to_string(SolverTag tag);

struct PlanEntry {
  std::size_t i;
  std::size_t j;
  double mass;
};

struct SolverDiagnostics {
  long iterations = 0;
  double epsilon = 0.0;
  double marginal_violation = 0.0;
  double duality_gap = 0.0;
  bool converged = true;
  std::string note;
};

struct TransportResult {
  double cost = 0.0;  // W_p^p
  std::vector<std::size_t> permutation;  // assignment solvers: row i -> column permutation[i]
  std::vector<PlanEntry> coupling;       // general solvers
  SolverTag solver = SolverTag::exact_assignment;
  double p = 2.0;
  SolverDiagnostics diagnostics;
};

/// Largest deviation of the plan marginals from the given weights.
double plan_marginal_violation(const TransportResult& r, const std::vector<double>& a, const std::vector<double>& b);

/// sum plan_ij |x_i - y_j|^p recomputed from the points.
double plan_cost(const TransportResult& r, const PointCloud& X, const PointCloud& Y, double p);

/// Debug dump: header row, then one row per point with x coordinates followed by y coordinates.
void write_instance_csv(const std::string& path, const PointCloud& X, const PointCloud& Y);
std::pair<PointCloud, PointCloud> read_instance_csv(const std::string& path);

}  // namespace gaussmatch::ot
