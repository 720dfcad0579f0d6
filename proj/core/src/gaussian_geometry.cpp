#include "gaussmatch/gaussian_geometry.hpp"

#include <cmath>
#include <numbers>

#include "gaussmatch/common.hpp"
#include "gaussmatch/special.hpp"

namespace gaussmatch {

double gaussian_ball_mass(double R, int d) {
  require(d >= 1, "gaussian_ball_mass: d >= 1");
  require(R >= 0.0, "gaussian_ball_mass: R >= 0");
  if (std::isinf(R)) return 1.0;
  return chi_square_cdf(R * R, d);
}

double gaussian_shell_mass(double r_lo, double r_hi, int d) {
  require(0.0 <= r_lo && r_lo <= r_hi, "gaussian_shell_mass: need 0 <= r_lo <= r_hi");
  // Subtract upper tails when both radii sit beyond the bulk to avoid cancellation.
  if (r_lo * r_lo > d) {
    const double hi_tail = std::isinf(r_hi) ? 0.0 : chi_square_sf(r_hi * r_hi, d);
    return chi_square_sf(r_lo * r_lo, d) - hi_tail;
  }
  return gaussian_ball_mass(r_hi, d) - gaussian_ball_mass(r_lo, d);
}

double gaussian_sphere_measure(double r, int d) {
  require(d >= 1 && r >= 0.0, "gaussian_sphere_measure: invalid arguments");
  return chi_pdf(r, d);
}

double tail_moment(double R, int d, double p) {
  require(d >= 1, "tail_moment: d >= 1");
  require(R >= 0.0 && p >= 0.0, "tail_moment: R >= 0 and p >= 0");
  const double a = 0.5 * (d + p);
  const double log_moment = 0.5 * p * std::numbers::ln2 + std::lgamma(a) - std::lgamma(0.5 * d);
  return std::exp(log_moment) * gamma_q(a, 0.5 * R * R);
}

}  // namespace gaussmatch
