#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaussmatch/harness/experiment.hpp"

namespace gaussmatch::harness {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double intercept_se = 0.0;
  std::vector<double> n;
  std::vector<double> mean;
  std::vector<double> point_se;   // standard error of each mean
  std::vector<double> residuals;  // log mean - fitted, per point
  bool weighted = false;          // false when some point has zero SE
  std::vector<std::string> warnings;
};

/// Least squares of log(mean) on log(n), weights 1/(se/mean)^2. Falls back
/// to unweighted when any se is zero. Needs >= 3 points with positive means
/// and at least two distinct n; throws InvalidArgument otherwise.
RateFit fit_rate(const std::vector<double>& n, const std::vector<double>& mean, const std::vector<double>& se);

/// Rows with cost <= 0 are dropped (with a warning) before aggregating.
RateFit fit_rate(const ResultTable& table);

nlohmann::json to_json(const RateFit& fit);

}  // namespace gaussmatch::harness
