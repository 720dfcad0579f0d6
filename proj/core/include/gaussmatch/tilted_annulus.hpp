#pragma once

#include <span>

#include "gaussmatch/common.hpp"

namespace gaussmatch {

/// Parameters of the Gaussian that appears when the product
/// p_{s+t}(x,y) p_{s'+t}(x,y) dmu(x) is completed to a square in x.
struct TiltedAnnulus {
  double a;  // e^{-s-t}
  double b;  // e^{-s'-t}
  double alpha;
  double beta;

  static TiltedAnnulus make(double s, double s_prime, double t);

  /// alpha^2 / beta - 1, and the closed form (1-a)(1-b)/(a+b) it must equal.
  double ratio_excess() const { return alpha * alpha / beta - 1.0; }
  double ratio_excess_closed_form() const { return (1.0 - a) * (1.0 - b) / (a + b); }
};

struct TiltedIdentity {
  double lhs;  // int_D p_{s+t} p_{s'+t} dmu
  double rhs;  // p_{s+s'+2t}(y,y) mu(alpha D - (beta/alpha) y)
  double relative_gap() const;
};

/// Both sides for the annulus D = {r_lo <= |x| < r_hi}: the left side by
/// radial x angular quadrature, the right by integrating the chi^2_{d-1} CDF
/// against the coordinate of Z along y.
TiltedIdentity tilted_annulus_identity(double r_lo, double r_hi, double t, double s, double s_prime,
                                       std::span<const double> y, const QuadSettings& quad = {});

/// mu(alpha D - (beta/alpha) y) alone, with |shift| = (beta/alpha)|y|.
double shifted_annulus_mass(double rho_lo, double rho_hi, double shift, int d, const QuadSettings& quad = {});

}  // namespace gaussmatch
