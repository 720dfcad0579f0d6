#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaussmatch/common.hpp"
#include "gaussmatch/smoothing/schedule.hpp"

namespace gaussmatch::harness {

/// Bad configuration value or key. The CLI maps it to exit code 2.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum class Estimator { matching, proxy, certificate, lower_bound };
enum class SolverChoice { exact, sinkhorn, sorted_1d, auto_select };

std::string to_string(Estimator e);
std::string to_string(SolverChoice s);
Estimator parse_estimator(const std::string& s);
SolverChoice parse_solver(const std::string& s);

struct ExperimentConfig {
  int d = 3;
  double p = 2.0;
  std::vector<std::size_t> n_grid;
  std::optional<int> replicates;  // unset: default_replicates(n)
  Estimator estimator = Estimator::matching;
  SolverChoice solver = SolverChoice::auto_select;
  int proxy_multiplier = 32;
  std::uint64_t seed = 20261019;
  smoothing::Variant variant = smoothing::Variant::general_p;
  std::optional<double> c;
  double min_n = 16.0;
  double epsilon_min = 1e-3;
  int y_samples = 2000;
  bool timing = false;  // wall_time_ms is 0 unless set, keeping CSVs reproducible
  std::string out_dir = "out";
  int threads = 1;

  /// Throws ConfigError.
  void validate() const;
  int replicates_for(std::size_t n) const;
};

/// ceil(2^14 / n) clamped to [8, 512].
int default_replicates(std::size_t n);

/// Set one field from its key (the CLI flag name without dashes).
/// Throws ConfigError on an unknown key or unparsable value.
void apply_key_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Flat key=value file; '#' starts a comment, blank lines are ignored.
ExperimentConfig parse_config_file(const std::string& path, ExperimentConfig base = {});

std::vector<std::size_t> parse_n_grid(const std::string& s);

/// Every key accepted by apply_key_value.
const std::vector<std::string>& config_keys();

/// Echo of the configuration. `threads` and `out` are left out so the
/// summary does not depend on how the run was executed.
nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace gaussmatch::harness
