#include "gaussmatch/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gaussmatch/common.hpp"

namespace gaussmatch {
namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 200000;

// log of x^a e^{-x} / Gamma(a)
double log_gamma_prefactor(double a, double x) { return a * std::log(x) - x - std::lgamma(a); }

double gamma_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(log_gamma_prefactor(a, x));
}

double gamma_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(log_gamma_prefactor(a, x)) * h;
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0) || !std::isfinite(a) || std::isnan(x))
    throw InvalidArgument("incomplete gamma: requires a > 0 and x >= 0");
}

}  // namespace

double gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_continued_fraction(a, x);
}

double chi_square_cdf(double x, double dof) {
  if (x <= 0.0) return 0.0;
  return gamma_p(0.5 * dof, 0.5 * x);
}

double chi_square_sf(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

double noncentral_chi_square_cdf(double x, double dof, double noncentrality) {
  require(dof > 0.0 && noncentrality >= 0.0, "noncentral_chi_square_cdf: invalid parameters");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (noncentrality == 0.0) return chi_square_cdf(x, dof);

  const double half_lambda = 0.5 * noncentrality;
  const double half_x = 0.5 * x;
  const double a0 = 0.5 * dof;
  const auto mode = static_cast<long>(std::floor(half_lambda));

  // Poisson weight, central CDF and the recurrence increment
  // g(a) = half_x^a e^{-half_x} / Gamma(a+1) at the mode.
  const double weight_mode =
      std::exp(-half_lambda + mode * std::log(half_lambda) - std::lgamma(mode + 1.0));
  const double a_mode = a0 + mode;
  const double p_mode = gamma_p(a_mode, half_x);
  const double g_mode = std::exp(a_mode * std::log(half_x) - half_x - std::lgamma(a_mode + 1.0));

  double sum = weight_mode * p_mode;
  // Poisson mass actually summed; dividing by it cancels the rounding in
  // weight_mode, whose exponent is a difference of O(lambda log lambda) terms.
  double mass = weight_mode;

  // Upward: P(a+1) = P(a) - g(a), g(a+1) = g(a) * half_x / (a+1).
  {
    double w = weight_mode;
    double p = p_mode;
    double g = g_mode;
    double a = a_mode;
    for (long j = mode + 1; j < mode + 1000000; ++j) {
      p = std::max(0.0, p - g);
      g *= half_x / (a + 1.0);
      a += 1.0;
      w *= half_lambda / static_cast<double>(j);
      sum += w * p;
      mass += w;
      if (j > half_lambda && w < 1e-18) break;
    }
  }
  // Downward: P(a-1) = P(a) + g(a-1), g(a-1) = g(a) * a / half_x.
  {
    double w = weight_mode;
    double p = p_mode;
    double g = g_mode;
    double a = a_mode;
    for (long j = mode - 1; j >= 0; --j) {
      g *= a / half_x;
      a -= 1.0;
      p = std::min(1.0, p + g);
      w *= static_cast<double>(j + 1) / half_lambda;
      sum += w * p;
      mass += w;
      if (w < 1e-18) break;
    }
  }
  return std::min(1.0, std::max(0.0, sum / mass));
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw InvalidArgument("normal_quantile: p must lie in [0, 1]");
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

double unit_sphere_area(int d) {
  require(d >= 1, "unit_sphere_area: d >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double chi_pdf(double r, int dof) {
  if (r < 0.0) return 0.0;
  if (r == 0.0) return dof == 1 ? std::sqrt(2.0 / std::numbers::pi) : 0.0;
  const double k = dof;
  const double log_density =
      (k - 1.0) * std::log(r) - 0.5 * r * r - (0.5 * k - 1.0) * std::numbers::ln2 - std::lgamma(0.5 * k);
  return std::exp(log_density);
}

}  // namespace gaussmatch
