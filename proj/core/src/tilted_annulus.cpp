#include "gaussmatch/tilted_annulus.hpp"

#include <cmath>
#include <numbers>

#include "gaussmatch/mehler.hpp"
#include "gaussmatch/quadrature.hpp"
#include "gaussmatch/special.hpp"

namespace gaussmatch {

TiltedAnnulus TiltedAnnulus::make(double s, double s_prime, double t) {
  require(s > 0.0 && s_prime > 0.0 && t >= 0.0, "TiltedAnnulus: need s, s' > 0 and t >= 0");
  TiltedAnnulus ta{};
  ta.a = std::exp(-(s + t));
  ta.b = std::exp(-(s_prime + t));
  const double ca = -std::expm1(-2.0 * (s + t));
  const double cb = -std::expm1(-2.0 * (s_prime + t));
  ta.alpha = std::sqrt(1.0 + ta.a * ta.a / ca + ta.b * ta.b / cb);
  ta.beta = ta.a / ca + ta.b / cb;
  return ta;
}

double TiltedIdentity::relative_gap() const {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

double shifted_annulus_mass(double rho_lo, double rho_hi, double shift, int d, const QuadSettings& quad) {
  require(0.0 <= rho_lo && rho_lo <= rho_hi && shift >= 0.0, "shifted_annulus_mass: invalid radii");
  if (d == 1) {
    // |Z + c| in [lo, hi): two intervals for Z.
    auto interval = [](double lo, double hi) { return normal_cdf(hi) - normal_cdf(lo); };
    return interval(rho_lo - shift, rho_hi - shift) + interval(-rho_hi - shift, -rho_lo - shift);
  }
  const double lo2 = rho_lo * rho_lo, hi2 = rho_hi * rho_hi;
  auto g = [&](double z) {
    const double u = z + shift;
    const double u2 = u * u;
    const double upper = chi_square_cdf(hi2 - u2, d - 1);
    const double lower = chi_square_cdf(lo2 - u2, d - 1);
    return normal_pdf(z) * (upper - lower);
  };
  const double lo = -shift - rho_hi, hi = -shift + rho_hi;
  std::vector<double> breaks{-shift - rho_lo, -shift + rho_lo, 0.0};
  return integrate_checked(g, lo, hi, quad, "shifted_annulus_mass", breaks);
}

TiltedIdentity tilted_annulus_identity(double r_lo, double r_hi, double t, double s, double s_prime,
                                       std::span<const double> y, const QuadSettings& quad) {
  require(!y.empty() && all_finite(y), "tilted_annulus_identity: y must be finite");
  require(0.0 <= r_lo && r_lo < r_hi, "tilted_annulus_identity: need 0 <= r_lo < r_hi");
  const int d = static_cast<int>(y.size());
  const TiltedAnnulus ta = TiltedAnnulus::make(s, s_prime, t);
  const double u = s + t, v = s_prime + t;
  const double yy = squared_norm(y);
  const double y_norm = std::sqrt(yy);

  // log of p_u(x,y) p_v(x,y) times the Gaussian density, x at radius r and angle theta to y.
  auto log_integrand = [&](double r, double cos_theta) {
    const double xx = r * r;
    const double xy = r * y_norm * cos_theta;
    const double dist = xx + yy - 2.0 * xy;
    return mehler_log_kernel(u, d, xx, yy, dist) + mehler_log_kernel(v, d, xx, yy, dist) - 0.5 * xx -
           0.5 * d * std::log(2.0 * std::numbers::pi);
  };

  QuadSettings inner_q = quad;
  inner_q.rel_tol = quad.rel_tol * 0.1;
  double lhs = 0.0;
  if (d == 1) {
    auto g = [&](double r) { return std::exp(log_integrand(r, 1.0)) + std::exp(log_integrand(r, -1.0)); };
    std::vector<double> breaks;
    if (y_norm > r_lo && y_norm < r_hi) breaks.push_back(y_norm);
    lhs = integrate_checked(g, r_lo, r_hi, quad, "tilted_annulus_identity lhs", breaks);
  } else {
    const double sphere = unit_sphere_area(d - 1);
    auto radial = [&](double r) {
      auto angular = [&](double theta) {
        const double sn = std::sin(theta);
        const double weight = d == 2 ? 1.0 : std::pow(sn, d - 2);
        return weight * std::exp(log_integrand(r, std::cos(theta)));
      };
      const double ang = integrate_checked(angular, 0.0, std::numbers::pi, inner_q, "tilted_annulus_identity angle");
      return sphere * std::pow(r, d - 1) * ang;
    };
    std::vector<double> breaks;
    if (y_norm > r_lo && y_norm < r_hi) breaks.push_back(y_norm);
    lhs = integrate_checked(radial, r_lo, r_hi, quad, "tilted_annulus_identity lhs", breaks);
  }

  const double diag = std::exp(mehler_log_diagonal(u + v, d, yy));
  const double shift = ta.beta / ta.alpha * y_norm;
  const double mass = shifted_annulus_mass(ta.alpha * r_lo, ta.alpha * r_hi, shift, d, quad);
  return {lhs, diag * mass};
}

}  // namespace gaussmatch
