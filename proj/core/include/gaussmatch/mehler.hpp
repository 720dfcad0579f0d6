#pragma once

#include <span>

#include "gaussmatch/common.hpp"
#include "gaussmatch/quadrature.hpp"

namespace gaussmatch {

/// Mehler kernel p_t(x, y), the density of the OU transition from x
/// relative to the standard Gaussian. t may be +infinity (kernel == 1).
double mehler_kernel(double t, std::span<const double> x, std::span<const double> y);

/// log p_t(x, y) from |x|^2, |y|^2 and |x - y|^2.
/// exponent = -a|x-y|^2 / (2(1-a^2)) + a(|x|^2+|y|^2) / (2(1+a)), a = e^{-t}.
double mehler_log_kernel(double t, int d, double xx, double yy, double dist_sq);

/// p_t(x, x) = (1-a^2)^{-d/2} exp(a|x|^2 / (1+a)).
double mehler_diagonal(double t, std::span<const double> x);
double mehler_log_diagonal(double t, int d, double xx);

/// int |x-y|^2 p_t(x,y) dmu(y) = (1-e^{-t})^2 |x|^2 + d(1-e^{-2t}).
double kernel_second_moment(double t, std::span<const double> x);
double kernel_second_moment(double t, int d, double xx);

/// int |x-y|^p p_t(x,y) dmu(y): the p-th moment of |(1-a)x - sqrt(1-a^2) Z|,
/// by quadrature along x and over the chi law of the orthogonal part.
double kernel_p_cost(double t, std::span<const double> x, double p, const QuadSettings& quad = {});
double kernel_p_cost(double t, int d, double x_norm, double p, const QuadSettings& quad = {});

struct PowerIntegral {
  double value;
  double bound;  // (1-a^2)^{-(q-1)d/2} e^{(q-1)|x|^2/2}
  bool within_bound;
};

/// int p_t(x,y)^q dmu(y), q >= 2. The direction orthogonal to x factors in
/// closed form; the component along x is integrated by Gauss-Hermite after
/// shifting to the Gaussian envelope of the integrand.
PowerIntegral kernel_power_integral(double t, std::span<const double> x, double q, const QuadSettings& quad = {});

}  // namespace gaussmatch
