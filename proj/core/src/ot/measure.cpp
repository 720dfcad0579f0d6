#include "gaussmatch/ot/measure.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gaussmatch::ot {

DiscreteMeasure DiscreteMeasure::uniform(PointCloud points) {
  const std::size_t n = points.size();
  require(n > 0, "DiscreteMeasure::uniform: empty point set");
  return {std::move(points), std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

bool DiscreteMeasure::is_uniform() const {
  for (double w : weights)
    if (w != weights.front()) return false;
  return true;
}

void DiscreteMeasure::validate() const {
  require(size() > 0, "DiscreteMeasure: empty");
  require(weights.size() == size(), "DiscreteMeasure: weights and points differ in length");
  require(all_finite(points.coords()), "DiscreteMeasure: non-finite coordinate");
  double sum = 0.0;
  for (double w : weights) {
    require(w >= 0.0 && std::isfinite(w), "DiscreteMeasure: weights must be nonnegative");
    sum += w;
  }
  require(std::abs(sum - 1.0) <= 1e-12, "DiscreteMeasure: weights must sum to 1");
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols) {
  check_dense_size(rows, cols, "CostMatrix");
  values_.assign(rows * cols, fill);
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  require(values_.size() == rows * cols, "CostMatrix: value count does not match shape");
}

void check_dense_size(std::size_t rows, std::size_t cols, const char* what) {
  if (cols != 0 && rows > kMaxDenseEntries / cols)
    throw ResourceLimitError(std::string(what) + ": dense matrix of " + std::to_string(rows) + " x " +
                             std::to_string(cols) + " exceeds the 2^31 entry cap");
}

double pow_distance(std::span<const double> x, std::span<const double> y, double p) {
  const double d2 = squared_distance(x, y);
  if (p == 2.0) return d2;
  if (p == 1.0) return std::sqrt(d2);
  return std::pow(d2, 0.5 * p);
}

CostMatrix cost_matrix(const PointCloud& X, const PointCloud& Y, double p) {
  if (X.dim() != Y.dim()) throw DimensionMismatch("cost_matrix: dimension mismatch");
  require(p >= 1.0, "cost_matrix: p >= 1");
  CostMatrix C(X.size(), Y.size());
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = 0; j < Y.size(); ++j) C(i, j) = pow_distance(X[i], Y[j], p);
  return C;
}

std::string to_string(SolverTag tag) {
  switch (tag) {
    case SolverTag::exact_assignment: return "exact-assignment";
    case SolverTag::general_exact: return "general-exact";
    case SolverTag::sinkhorn: return "sinkhorn";
    case SolverTag::sorted_1d: return "sorted-1d";
    case SolverTag::brute_force: return "brute-force";
  }
  return "unknown";
}

double plan_marginal_violation(const TransportResult& r, const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> row(a.size(), 0.0), col(b.size(), 0.0);
  if (!r.permutation.empty()) {
    const double w = 1.0 / static_cast<double>(r.permutation.size());
    for (std::size_t i = 0; i < r.permutation.size(); ++i) {
      row[i] += w;
      col[r.permutation[i]] += w;
    }
  } else {
    for (const auto& e : r.coupling) {
      row[e.i] += e.mass;
      col[e.j] += e.mass;
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(row[i] - a[i]));
  for (std::size_t j = 0; j < b.size(); ++j) worst = std::max(worst, std::abs(col[j] - b[j]));
  return worst;
}

double plan_cost(const TransportResult& r, const PointCloud& X, const PointCloud& Y, double p) {
  double total = 0.0;
  if (!r.permutation.empty()) {
    for (std::size_t i = 0; i < r.permutation.size(); ++i) total += pow_distance(X[i], Y[r.permutation[i]], p);
    return total / static_cast<double>(r.permutation.size());
  }
  for (const auto& e : r.coupling) total += e.mass * pow_distance(X[e.i], Y[e.j], p);
  return total;
}

void write_instance_csv(const std::string& path, const PointCloud& X, const PointCloud& Y) {
  require(X.dim() == Y.dim() && X.size() == Y.size(), "write_instance_csv: shapes differ");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_instance_csv: cannot open " + path);
  out.precision(17);
  for (std::size_t k = 0; k < X.dim(); ++k) out << "x" << k << ',';
  for (std::size_t k = 0; k < Y.dim(); ++k) out << "y" << k << (k + 1 < Y.dim() ? "," : "\n");
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (double v : X[i]) out << v << ',';
    for (std::size_t k = 0; k < Y.dim(); ++k) out << Y[i][k] << (k + 1 < Y.dim() ? "," : "\n");
  }
}

std::pair<PointCloud, PointCloud> read_instance_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_instance_csv: cannot open " + path);
  std::string line;
  std::getline(in, line);
  std::size_t columns = 1;
  for (char ch : line) columns += ch == ',';
  require(columns % 2 == 0, "read_instance_csv: odd column count");
  const std::size_t d = columns / 2;
  PointCloud X(d), Y(d);
  std::vector<double> row(columns);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t k = 0; k < columns; ++k) {
      require(static_cast<bool>(std::getline(ss, cell, ',')), "read_instance_csv: short row");
      row[k] = std::stod(cell);
    }
    X.push_back(std::span<const double>(row.data(), d));
    Y.push_back(std::span<const double>(row.data() + d, d));
  }
  return {std::move(X), std::move(Y)};
}

}  // namespace gaussmatch::ot
