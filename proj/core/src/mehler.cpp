#include "gaussmatch/mehler.hpp"

#include <cmath>
#include <limits>

#include "gaussmatch/special.hpp"

namespace gaussmatch {
namespace {

void check_time(double t, const char* what) {
  if (std::isnan(t) || t < 0.0) throw InvalidArgument(std::string(what) + ": time must be >= 0");
}

void check_point(std::span<const double> x, const char* what) {
  if (x.empty()) throw InvalidArgument(std::string(what) + ": empty point");
  if (!all_finite(x)) throw InvalidArgument(std::string(what) + ": non-finite coordinate");
}

}  // namespace

double mehler_log_kernel(double t, int d, double xx, double yy, double dist_sq) {
  if (std::isinf(t)) return 0.0;
  const double a = std::exp(-t);
  const double one_minus_a2 = -std::expm1(-2.0 * t);
  return -0.5 * d * std::log(one_minus_a2) - a * dist_sq / (2.0 * one_minus_a2) +
         a * (xx + yy) / (2.0 * (1.0 + a));
}

double mehler_kernel(double t, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("mehler_kernel: dimension mismatch");
  check_point(x, "mehler_kernel");
  check_point(y, "mehler_kernel");
  if (!(t > 0.0)) throw InvalidArgument("mehler_kernel: t must be > 0");
  return std::exp(mehler_log_kernel(t, static_cast<int>(x.size()), squared_norm(x), squared_norm(y),
                                    squared_distance(x, y)));
}

double mehler_log_diagonal(double t, int d, double xx) {
  if (std::isinf(t)) return 0.0;
  const double a = std::exp(-t);
  return -0.5 * d * std::log(-std::expm1(-2.0 * t)) + a * xx / (1.0 + a);
}

double mehler_diagonal(double t, std::span<const double> x) {
  check_point(x, "mehler_diagonal");
  if (!(t > 0.0)) throw InvalidArgument("mehler_diagonal: t must be > 0");
  return std::exp(mehler_log_diagonal(t, static_cast<int>(x.size()), squared_norm(x)));
}

double kernel_second_moment(double t, int d, double xx) {
  check_time(t, "kernel_second_moment");
  if (std::isinf(t)) return xx + d;
  const double one_minus_a = -std::expm1(-t);
  return one_minus_a * one_minus_a * xx - d * std::expm1(-2.0 * t);
}

double kernel_second_moment(double t, std::span<const double> x) {
  check_point(x, "kernel_second_moment");
  return kernel_second_moment(t, static_cast<int>(x.size()), squared_norm(x));
}

double kernel_p_cost(double t, int d, double x_norm, double p, const QuadSettings& quad) {
  check_time(t, "kernel_p_cost");
  require(p >= 1.0, "kernel_p_cost: p must be >= 1");
  require(d >= 1 && std::isfinite(x_norm) && x_norm >= 0.0, "kernel_p_cost: invalid point");
  if (t == 0.0) return 0.0;
  if (p == 2.0) return kernel_second_moment(t, d, x_norm * x_norm);

  const double v = std::isinf(t) ? x_norm : -std::expm1(-t) * x_norm;
  const double sigma = std::isinf(t) ? 1.0 : std::sqrt(-std::expm1(-2.0 * t));
  const double half_p = 0.5 * p;
  const double z0 = v / sigma;  // |u| vanishes here
  constexpr double kSpan = 40.0;

  QuadSettings inner_settings = quad;
  inner_settings.rel_tol = quad.rel_tol * 0.1;
  inner_settings.abs_tol = quad.abs_tol * 0.1;

  // E over the orthogonal chi_{d-1} radius of (u^2 + sigma^2 r^2)^{p/2}.
  auto inner = [&](double u) {
    if (d == 1) return std::pow(std::abs(u), p);
    const double r_hi = std::sqrt(d - 1.0) + kSpan;
    auto g = [&](double r) { return std::pow(u * u + sigma * sigma * r * r, half_p) * chi_pdf(r, d - 1); };
    std::vector<double> breaks{std::sqrt(std::max(d - 2.0, 0.0))};
    return integrate_checked(g, 0.0, r_hi, inner_settings, "kernel_p_cost (orthogonal)", breaks);
  };
  auto outer = [&](double z) { return normal_pdf(z) * inner(v - sigma * z); };
  std::vector<double> breaks{0.0};
  if (std::abs(z0) < kSpan) breaks.push_back(z0);
  return integrate_checked(outer, -kSpan, kSpan, quad, "kernel_p_cost", breaks);
}

double kernel_p_cost(double t, std::span<const double> x, double p, const QuadSettings& quad) {
  check_point(x, "kernel_p_cost");
  return kernel_p_cost(t, static_cast<int>(x.size()), std::sqrt(squared_norm(x)), p, quad);
}

PowerIntegral kernel_power_integral(double t, std::span<const double> x, double q, const QuadSettings& quad) {
  check_point(x, "kernel_power_integral");
  require(t > 0.0, "kernel_power_integral: t must be > 0");
  require(q >= 2.0, "kernel_power_integral: q must be >= 2");
  const int d = static_cast<int>(x.size());
  const double xx = squared_norm(x);
  const double x_norm = std::sqrt(xx);
  const double a = std::exp(-t);
  const double s2 = -std::expm1(-2.0 * t);  // 1 - a^2

  // p_t^q = (1-a^2)^{-qd/2} exp(q(2a|x| y1 - a^2|x|^2 - a^2 y1^2 - a^2|y_perp|^2) / (2(1-a^2)))
  const double kappa = q * a * a / s2;
  const double b = q * a * x_norm / s2;
  const double log_prefactor = -0.5 * q * d * std::log(s2) - 0.5 * (d - 1.0) * std::log1p(kappa) -
                               q * a * a * xx / (2.0 * s2);
  // y1 integral: int phi(y) exp(-kappa y^2/2 + b y) dy; envelope N(m, 1/(1+kappa)).
  const double m = b / (1.0 + kappa);
  const double scale = 1.0 / std::sqrt(1.0 + kappa);
  const double log_envelope = 0.5 * b * m;  // value of the exponent completed to a square
  auto ratio = [&](double z) {
    const double y = m + scale * z;
    const double exponent = -0.5 * (1.0 + kappa) * y * y + b * y - log_envelope + 0.5 * z * z;
    return std::exp(exponent);
  };
  const double along = scale * gauss_hermite_integrate(ratio, quad.nodes);
  const double log_value = log_prefactor + log_envelope + std::log(along);

  PowerIntegral out;
  out.value = std::exp(log_value);
  const double log_bound = -0.5 * (q - 1.0) * d * std::log(s2) + 0.5 * (q - 1.0) * xx;
  out.bound = std::exp(log_bound);
  out.within_bound = log_value <= log_bound + 1e-12 * std::max(1.0, std::abs(log_bound));
  return out;
}

}  // namespace gaussmatch
