#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gaussmatch::smoothing {

enum class Variant { general_p, p_equals_d };
std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

/// Partition of B_R into annuli D_k = {r_{k-1} <= |x| < r_k}, k = 1..m, with
/// a regularization time t_k and split time s_k = 1/sqrt(k) per annulus.
class AnnulusSchedule {
 public:
  /// R = sqrt(2c log n), m = ceil(R^2), r_k = sqrt(k) for k < m, r_m = R.
  /// general-p: t_k = n^{-2/d} e^{r_k^2/d}; p-equals-d: t_k = e^{r_k^2/d} / (n^{2/d} r_k).
  /// Default c is (p/d + 1)/2 for general-p and 1 for p-equals-d.
  /// Throws InvalidArgument when n < min_n, the exponents are out of range,
  /// or t_m >= 1.
  static AnnulusSchedule build(double n, int d, double p, Variant variant, std::optional<double> c = {},
                               double min_n = 16.0);

  /// Explicit radii r_0 = 0 < r_1 < ... < r_m and times t_1..t_m.
  static AnnulusSchedule custom(int d, double p, std::vector<double> radii, std::vector<double> times);

  int d() const noexcept { return d_; }
  double p() const noexcept { return p_; }
  double n() const noexcept { return n_; }
  double c() const noexcept { return c_; }
  double R() const noexcept { return radii_.back(); }
  int m() const noexcept { return static_cast<int>(times_.size()); }
  Variant variant() const noexcept { return variant_; }
  bool is_custom() const noexcept { return custom_; }

  /// k in 0..m
  double radius(int k) const;
  /// k in 1..m
  double time(int k) const;
  double split_time(int k) const;
  /// mu(D_k)
  double mass(int k) const;
  double ball_mass() const noexcept { return ball_mass_; }

  const std::vector<double>& radii() const noexcept { return radii_; }
  const std::vector<double>& times() const noexcept { return times_; }

  /// Annulus index of a point with norm |x| < R; |x| = r_k goes to D_{k+1}.
  int annulus_of(double norm) const;
  /// T(x) and S(x)
  double time_of(double norm) const { return time(annulus_of(norm)); }
  double split_time_of(double norm) const { return split_time(annulus_of(norm)); }

  /// Empty when every invariant holds; otherwise one message per violation.
  std::vector<std::string> invariant_violations() const;

  bool operator==(const AnnulusSchedule& o) const {
    return d_ == o.d_ && p_ == o.p_ && n_ == o.n_ && c_ == o.c_ && variant_ == o.variant_ && custom_ == o.custom_ &&
           radii_ == o.radii_ && times_ == o.times_;
  }

 private:
  void finish();

  int d_ = 0;
  double p_ = 0.0, n_ = 0.0, c_ = 0.0;
  Variant variant_ = Variant::general_p;
  bool custom_ = false;
  std::vector<double> radii_;  // r_0..r_m
  std::vector<double> times_;  // t_1..t_m
  std::vector<double> masses_;
  double ball_mass_ = 0.0;
};

double annulus_mass(int k, const AnnulusSchedule& schedule);

/// Gaussian surface measure of the two spheres bounding D_k; the r_0 sphere counts 0.
double annulus_surface(int k, const AnnulusSchedule& schedule);

}  // namespace gaussmatch::smoothing
