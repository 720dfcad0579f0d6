#pragma once

#include <vector>

#include "gaussmatch/common.hpp"

namespace gaussmatch {

/// Probabilists' Hermite polynomial He_k(x).
double hermite(int k, double x);

/// f = sum_k c_k He_k in one dimension. ||He_k||_2^2 = k! under N(0,1).
class HermiteExpansion {
 public:
  HermiteExpansion() = default;
  explicit HermiteExpansion(std::vector<double> coeffs);

  /// scale * He_k
  static HermiteExpansion basis(int k, double scale = 1.0);

  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  double coeff(int k) const { return k < static_cast<int>(coeffs_.size()) ? coeffs_[k] : 0.0; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool mean_zero() const noexcept { return coeffs_.empty() || coeffs_[0] == 0.0; }

  double operator()(double x) const;

  /// He_k' = k He_{k-1}.
  HermiteExpansion derivative() const;

  /// sum_k c_k^2 k!
  double l2_norm_sq() const;

  HermiteExpansion& operator+=(const HermiteExpansion& o);
  friend HermiteExpansion operator+(HermiteExpansion a, const HermiteExpansion& b) { return a += b; }
  friend HermiteExpansion operator*(double s, HermiteExpansion f) {
    for (double& c : f.coeffs_) c *= s;
    return f;
  }

 private:
  std::vector<double> coeffs_;
};

/// int f g dmu = sum_k f_k g_k k!
double hermite_inner(const HermiteExpansion& f, const HermiteExpansion& g);

/// P_t f: coefficient k scaled by e^{-kt}.
HermiteExpansion semigroup_apply(const HermiteExpansion& f, double t);

/// P_t f (x) = E f(e^{-t} x + sqrt(1 - e^{-2t}) Z), by Gauss-Hermite.
double semigroup_apply_quadrature(const HermiteExpansion& f, double t, double x, int nodes = 64);

/// (-L)^exponent: coefficient k >= 1 scaled by k^exponent. c_0 is kept for
/// exponent 0, dropped for positive exponents and rejected for negative ones.
HermiteExpansion spectral_apply(const HermiteExpansion& f, double exponent);

/// sum_k k c_k^2 k! = ||(-L)^{1/2} f||_2^2 = int |f'|^2 dmu
double riesz_energy(const HermiteExpansion& f);

/// int |f|^p dmu. Even integer p uses Gauss-Hermite with enough nodes to be
/// exact; otherwise adaptive quadrature split at the real roots of f.
double lp_norm_pow(const HermiteExpansion& f, double p, const QuadSettings& quad = {});
double gradient_lp_norm_pow(const HermiteExpansion& f, double p, const QuadSettings& quad = {});

/// (int |f|^p dmu)^{1/p}
double lp_norm(const HermiteExpansion& f, double p, const QuadSettings& quad = {});
double gradient_lp_norm(const HermiteExpansion& f, double p, const QuadSettings& quad = {});

}  // namespace gaussmatch
