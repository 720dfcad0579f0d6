#pragma once

// Radial integrals against the standard Gaussian measure mu on R^d.

namespace gaussmatch {

/// mu(B_R) = P(chi^2_d <= R^2).
double gaussian_ball_mass(double R, int d);

/// mu(r_lo <= |x| < r_hi).
double gaussian_shell_mass(double r_lo, double r_hi, int d);

/// Gaussian surface measure of the sphere of radius r (zero at r = 0 for d >= 2).
double gaussian_sphere_measure(double r, int d);

/// int_{|x| > R} |x|^p dmu = 2^{p/2} Gamma((d+p)/2)/Gamma(d/2) Q((d+p)/2, R^2/2).
double tail_moment(double R, int d, double p);

inline double tail_second_moment(double R, int d, double p = 2.0) { return tail_moment(R, d, p); }

}  // namespace gaussmatch
