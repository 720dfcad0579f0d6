#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaussmatch/ot/solvers.hpp"

namespace gaussmatch::harness {

struct CheckEntry {
  std::string suite;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckEntry> entries;
  double seconds = 0.0;

  bool all_passed() const;
  std::size_t failures() const;
  nlohmann::json to_json() const;
};

struct CheckOptions {
  std::uint64_t seed = 20261019;
  /// Assignment solver under test; replaced in mutation tests.
  ot::AssignmentSolver assignment = ot::solve_assignment;
  int mc_y_samples = 100000;  // Monte Carlo oracle size for the H^{-1,2} check
};

const std::vector<std::string>& check_suites();

/// suite is one of kernel, spectral, ot, pipeline, bounds, all.
/// Throws InvalidArgument for an unknown suite name; failures are entries.
CheckReport run_check(const std::string& suite, const CheckOptions& options = {});

}  // namespace gaussmatch::harness
