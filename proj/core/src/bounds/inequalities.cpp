#include "gaussmatch/bounds/inequalities.hpp"

#include <cmath>

namespace gaussmatch::bounds {

double contraction_coefficient(double c) {
  require(c > 0.0 && c <= 1.0, "contraction_coefficient: c must lie in (0, 1]");
  const double q = 1.0 - std::sqrt(1.0 - c);
  return 4.0 / (c * c) * q * q;
}

double contraction_profile(double s, double c) {
  require(c > 0.0 && c <= 1.0, "contraction_profile: c must lie in (0, 1]");
  require(s >= 0.0 && s <= 1.0, "contraction_profile: s must lie in [0, 1]");
  const double q = 1.0 - std::sqrt(1.0 - c);
  return q / c * (2.0 * s - q * s * s);
}

double dual_lower_bound(const HermiteExpansion& g, const HermiteExpansion& h, double c, const DualLowerOptions& opts) {
  require(c > 0.0, "dual_lower_bound: c > 0");
  if (!h.mean_zero()) throw InvalidArgument("dual_lower_bound: h must be mean-zero");
  require(opts.grid_points >= 2, "dual_lower_bound: grid needs at least two points");
  for (int i = 0; i < opts.grid_points; ++i) {
    const double x = -opts.grid_half_width + 2.0 * opts.grid_half_width * i / (opts.grid_points - 1);
    if (h(x) > c) throw InvalidArgument("dual_lower_bound: h exceeds c at x = " + std::to_string(x));
  }
  // int u (-L)^{-1} v dmu = sum_{k>=1} u_k v_k k! / k
  double gh = 0.0, hh = 0.0;
  double factorial = 1.0;  // (k-1)!
  for (int k = 1; k <= std::max(g.degree(), h.degree()); ++k) {
    if (k > 1) factorial *= (k - 1);
    gh += g.coeff(k) * h.coeff(k) * factorial;
    hh += h.coeff(k) * h.coeff(k) * factorial;
  }
  return 2.0 * gh - std::expm1(c) / c * hh;
}

}  // namespace gaussmatch::bounds
