#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gaussmatch/common.hpp"
#include "gaussmatch/quadrature.hpp"
#include "gaussmatch/rng.hpp"
#include "gaussmatch/sampling.hpp"
#include "gaussmatch/smoothing/schedule.hpp"

namespace gaussmatch::smoothing {

struct Localization {
  EmpiricalSample sample;  // localized copy
  double cost = 0.0;       // (2^p / n) sum |X_i|^p 1{|X_i| >= R}
};

/// Replace every point with |X_i| >= R by a fresh draw from mu restricted to B_R.
Localization localize(const EmpiricalSample& sample, const AnnulusSchedule& schedule, Stream& stream);

/// f(y) = (1/n) sum_i p_{T_i}(X_i, y): Mehler kernels launched from the atoms.
class SmoothedEmpirical {
 public:
  SmoothedEmpirical(PointCloud atoms, std::vector<double> times);
  SmoothedEmpirical(PointCloud atoms, std::vector<double> times, AnnulusSchedule schedule,
                    std::vector<int> annuli);

  std::size_t size() const noexcept { return atoms_.size(); }
  int dim() const noexcept { return static_cast<int>(atoms_.dim()); }
  const PointCloud& atoms() const noexcept { return atoms_; }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<int>& annuli() const noexcept { return annuli_; }
  const std::optional<AnnulusSchedule>& schedule() const noexcept { return schedule_; }

 private:
  PointCloud atoms_;
  std::vector<double> times_;
  std::vector<int> annuli_;
  std::optional<AnnulusSchedule> schedule_;
};

/// T_i = t_k for X_i in D_k. Throws InvalidArgument for atoms outside B_R.
SmoothedEmpirical assign_times(const EmpiricalSample& localized, const AnnulusSchedule& schedule);

double density_eval(const SmoothedEmpirical& sm, std::span<const double> y);

/// P_s g(y) = (1/n) sum_i [p_{s+T_i}(X_i, y) - 1].
double fluctuation_eval(const SmoothedEmpirical& sm, std::span<const double> y, double s);

/// (1/n) sum_i int |X_i - y|^p p_{T_i}(X_i, y) dmu(y).
double regularization_cost(const SmoothedEmpirical& sm, double p, const QuadSettings& quad = {});

struct NormValue {
  double value = 0.0;
  double standard_error = 0.0;  // Monte Carlo estimates only
  QuadDiagnostics diagnostics;
};

/// ||f - 1||^2_{H^{-1,2}} = 2 int_0^inf (1/n^2) sum_{i,j} [p_{2s+T_i+T_j}(X_i, X_j) - 1] ds.
/// Pairs are grouped by (T_i, T_j) so that each s costs one exp per pair.
NormValue h12_norm_sq(const SmoothedEmpirical& sm, const QuadSettings& quad = {1, 4000, 1e-6, 1e-14});

/// Monte Carlo oracle for the same quantity: 2 int_0^{s_max} mean_y (P_s g(y))^2 ds
/// with y ~ mu and the trapezoid rule on a grid uniform in log(s) plus the origin.
NormValue h12_norm_sq_monte_carlo(const SmoothedEmpirical& sm, int y_samples, int s_points, Stream& stream);

/// Monte Carlo over y ~ mu of |(1/sqrt(pi)) int_0^inf s^{-1/2} P_s g(y) ds|^p,
/// the inner integral taken as (2/sqrt(pi)) int_0^{u_max} P_{u^2} g(y) du.
/// Throws QuadratureError if the standard error exceeds `max_standard_error` (> 0).
NormValue h1p_norm_estimate(const SmoothedEmpirical& sm, double p, int y_samples, Stream& stream,
                            const QuadSettings& quad = {1, 2000, 1e-6, 1e-13}, double max_standard_error = 0.0);

/// (-L)^{-1/2} g (y) for the fluctuation field of sm.
double inverse_sqrt_generator_fluctuation(const SmoothedEmpirical& sm, std::span<const double> y,
                                          const QuadSettings& quad, QuadDiagnostics* diag = nullptr);

}  // namespace gaussmatch::smoothing
