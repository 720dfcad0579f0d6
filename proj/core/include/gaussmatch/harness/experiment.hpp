#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaussmatch/harness/config.hpp"

namespace gaussmatch::harness {

struct ResultRow {
  std::size_t n = 0;
  int replicate = 0;
  std::uint64_t seed = 0;  // key of the replicate's sample stream
  double cost = 0.0;
  std::string estimator;
  double wall_time_ms = 0.0;
};

struct Aggregate {
  std::size_t n = 0;
  double mean = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(count); 0 for one row
  int count = 0;
};

struct ResultTable {
  std::vector<ResultRow> rows;         // grouped by n, replicate order within
  std::vector<std::string> warnings;   // in grid order

  /// One entry per distinct n, summing rows in table order.
  std::vector<Aggregate> aggregate() const;
};

/// Solver actually used for a matching instance of size n.
SolverChoice resolve_solver(const ExperimentConfig& cfg, std::size_t n);

/// Cost of one (n, replicate) cell. Warnings, if any, are appended.
double replicate_cost(const ExperimentConfig& cfg, std::size_t n, int replicate, std::vector<std::string>& warnings);

/// All cells of the grid, dispatched to cfg.threads workers. Output does not
/// depend on the thread count.
ResultTable run_experiment(const ExperimentConfig& cfg);

}  // namespace gaussmatch::harness
