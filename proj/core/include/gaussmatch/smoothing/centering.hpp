#pragma once

#include "gaussmatch/quadrature.hpp"
#include "gaussmatch/smoothing/schedule.hpp"

namespace gaussmatch::smoothing {

/// P_tau 1_{r_lo <= |x| < r_hi} at a point of norm rho: a difference of
/// non-central chi-square CDFs.
double semigroup_annulus_indicator(double tau, double r_lo, double r_hi, double rho, int d);

/// P_s phi at a point of norm rho, where
/// phi = (1/mu(B_R)) sum_k [P_{t_k} 1_{D_k} - mu(D_k)].
double centering_field(const AnnulusSchedule& schedule, double rho, double s = 0.0);

/// int P_s phi dmu (zero up to quadrature error).
double centering_mean(const AnnulusSchedule& schedule, double s, const QuadSettings& quad = {1, 4000, 1e-9, 1e-14});

struct CenteringValue {
  double value = 0.0;
  QuadDiagnostics diagnostics;
};

/// p = 2: int_0^inf int (P_s phi)^2 dmu ds.
/// otherwise: int |int_0^inf s^{-1/2} P_s phi ds|^p dmu.
/// phi is radial, so both reduce to one-dimensional quadrature in |y|.
/// Results are cached per (schedule, p, tolerance).
CenteringValue centering_norm(const AnnulusSchedule& schedule, double p,
                              const QuadSettings& quad = {1, 2000, 1e-6, 1e-14});

}  // namespace gaussmatch::smoothing
