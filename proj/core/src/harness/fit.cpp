#include "gaussmatch/harness/fit.hpp"

#include <cmath>

namespace gaussmatch::harness {

RateFit fit_rate(const std::vector<double>& n, const std::vector<double>& mean, const std::vector<double>& se) {
  require(n.size() == mean.size() && n.size() == se.size(), "fit_rate: length mismatch");
  require(n.size() >= 3, "fit_rate: need at least 3 grid points");
  for (std::size_t i = 0; i < n.size(); ++i)
    require(n[i] > 0.0 && mean[i] > 0.0 && std::isfinite(mean[i]), "fit_rate: n and means must be positive");

  RateFit fit;
  fit.n = n;
  fit.mean = mean;
  fit.point_se = se;
  fit.weighted = true;
  for (double s : se)
    if (!(s > 0.0)) fit.weighted = false;

  const std::size_t k = n.size();
  std::vector<double> x(k), y(k), w(k, 1.0);
  for (std::size_t i = 0; i < k; ++i) {
    x[i] = std::log(n[i]);
    y[i] = std::log(mean[i]);
    if (fit.weighted) {
      const double rel = se[i] / mean[i];
      w[i] = 1.0 / (rel * rel);
    }
  }
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double xbar = sx / sw, ybar = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
    sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
  }
  require(sxx > 0.0, "fit_rate: degenerate grid (all n equal)");
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;

  double rss = 0.0;
  fit.residuals.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
    rss += w[i] * fit.residuals[i] * fit.residuals[i];
  }
  const double sigma2 = rss / static_cast<double>(k - 2);
  fit.slope_se = std::sqrt(sigma2 / sxx);
  fit.intercept_se = std::sqrt(sigma2 * (1.0 / sw + xbar * xbar / sxx));
  return fit;
}

RateFit fit_rate(const ResultTable& table) {
  ResultTable kept;
  std::vector<std::string> warnings;
  for (const auto& r : table.rows) {
    if (r.cost > 0.0) {
      kept.rows.push_back(r);
    } else {
      warnings.push_back("n=" + std::to_string(r.n) + " replicate " + std::to_string(r.replicate) +
                         ": nonpositive cost excluded from fit");
    }
  }
  std::vector<double> n, mean, se;
  for (const auto& a : kept.aggregate()) {
    n.push_back(static_cast<double>(a.n));
    mean.push_back(a.mean);
    se.push_back(a.se);
  }
  RateFit fit = fit_rate(n, mean, se);
  fit.warnings = std::move(warnings);
  if (!fit.weighted) fit.warnings.push_back("some point has zero standard error; unweighted fit");
  return fit;
}

nlohmann::json to_json(const RateFit& fit) {
  return {{"slope", fit.slope},
          {"slope_se", fit.slope_se},
          {"intercept", fit.intercept},
          {"intercept_se", fit.intercept_se},
          {"weighted", fit.weighted},
          {"n", fit.n},
          {"mean", fit.mean},
          {"point_se", fit.point_se},
          {"residuals", fit.residuals},
          {"warnings", fit.warnings}};
}

}  // namespace gaussmatch::harness
