#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "gaussmatch/harness/config.hpp"
#include "gaussmatch/harness/experiment.hpp"
#include "gaussmatch/harness/fit.hpp"

namespace gaussmatch::harness {

std::string software_version();

/// n,replicate,seed,cost,estimator,wall_time_ms with costs at 17 significant digits.
std::string to_csv(const ResultTable& table);
void write_csv(const ResultTable& table, const std::string& path);
ResultTable read_csv(const std::string& path);

/// {config, aggregates, fit, warnings, version}. `fit` is null when absent.
nlohmann::json summary_json(const ExperimentConfig& cfg, const ResultTable& table, const std::optional<RateFit>& fit);

/// Log-log plot of the means with SE bars, the fitted line and a reference
/// line of slope `reference_slope` through the first point.
std::string to_svg(const ResultTable& table, const std::optional<RateFit>& fit, double reference_slope,
                   const std::string& title);

struct OutputPaths {
  std::string csv, json, svg;
};

/// Writes results.csv, summary.json and rates.svg under cfg.out_dir.
/// Throws std::runtime_error on I/O failure.
OutputPaths emit_outputs(const ExperimentConfig& cfg, const ResultTable& table, const std::optional<RateFit>& fit);

}  // namespace gaussmatch::harness
