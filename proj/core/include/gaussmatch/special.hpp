#pragma once

// Special functions used across the Gaussian integrals: regularized incomplete
// gamma, chi-square laws (central and non-central) and the normal quantile.

namespace gaussmatch {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
/// Series for x < a + 1, Lentz continued fraction otherwise.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed directly
/// in the branch where it is small so tails keep relative accuracy.
double gamma_q(double a, double x);

/// P(chi^2_dof <= x).
double chi_square_cdf(double x, double dof);
/// P(chi^2_dof > x).
double chi_square_sf(double x, double dof);

/// P(chi'^2_dof(noncentrality) <= x), Poisson mixture of central laws summed
/// outward from the mode with incomplete-gamma recurrences.
double noncentral_chi_square_cdf(double x, double dof, double noncentrality);

double normal_pdf(double x);
double normal_cdf(double x);
/// Inverse of the standard normal CDF (Wichura AS241, ~1e-16 relative).
double normal_quantile(double p);

/// Surface area of the unit sphere S^{d-1} in R^d: 2 pi^{d/2} / Gamma(d/2).
double unit_sphere_area(int d);

/// Density of |Z| for Z standard normal in R^dof (chi distribution).
double chi_pdf(double r, int dof);

}  // namespace gaussmatch
