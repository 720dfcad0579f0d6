#include "gaussmatch/smoothing/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "gaussmatch/common.hpp"
#include "gaussmatch/gaussian_geometry.hpp"

namespace gaussmatch::smoothing {

std::string to_string(Variant v) { return v == Variant::general_p ? "general" : "p-equals-d"; }

Variant parse_variant(const std::string& s) {
  if (s == "general" || s == "general-p") return Variant::general_p;
  if (s == "p-equals-d") return Variant::p_equals_d;
  throw InvalidArgument("unknown variant '" + s + "' (expected general or p-equals-d)");
}

AnnulusSchedule AnnulusSchedule::build(double n, int d, double p, Variant variant, std::optional<double> c,
                                       double min_n) {
  require(d >= 2, "build_schedule: d must be >= 2");
  require(n >= min_n, "build_schedule: n = " + std::to_string(n) + " is below the minimum " + std::to_string(min_n));
  AnnulusSchedule s;
  s.d_ = d;
  s.p_ = p;
  s.n_ = n;
  s.variant_ = variant;
  if (variant == Variant::general_p) {
    require(p >= 1.0 && p < d, "build_schedule: general-p requires 1 <= p < d");
    s.c_ = c.value_or(0.5 * (p / d + 1.0));
    require(s.c_ > p / d && s.c_ < 1.0, "build_schedule: c must lie in (p/d, 1)");
  } else {
    require(p == d, "build_schedule: p-equals-d requires p == d");
    s.c_ = c.value_or(1.0);
    require(s.c_ > 0.0 && s.c_ <= 1.0, "build_schedule: c must lie in (0, 1]");
  }
  const double log_n = std::log(n);
  const double R2 = 2.0 * s.c_ * log_n;
  const int m = static_cast<int>(std::ceil(R2 - 1e-12));
  require(m >= 1, "build_schedule: empty annulus set");
  s.radii_.resize(m + 1);
  s.radii_[0] = 0.0;
  for (int k = 1; k < m; ++k) s.radii_[k] = std::sqrt(static_cast<double>(k));
  s.radii_[m] = std::sqrt(R2);
  s.times_.resize(m);
  for (int k = 1; k <= m; ++k) {
    const double r = s.radii_[k];
    const double log_t = -2.0 / d * log_n + r * r / d - (variant == Variant::p_equals_d ? std::log(r) : 0.0);
    s.times_[k - 1] = std::exp(log_t);
  }
  require(s.times_.back() < 1.0, "build_schedule: n too small, t_m = " + std::to_string(s.times_.back()) + " >= 1");
  s.finish();
  return s;
}

AnnulusSchedule AnnulusSchedule::custom(int d, double p, std::vector<double> radii, std::vector<double> times) {
  require(d >= 1, "AnnulusSchedule::custom: d >= 1");
  require(radii.size() >= 2 && radii.front() == 0.0, "AnnulusSchedule::custom: radii must start at 0");
  require(times.size() + 1 == radii.size(), "AnnulusSchedule::custom: need one time per annulus");
  for (std::size_t k = 1; k < radii.size(); ++k)
    require(radii[k] > radii[k - 1], "AnnulusSchedule::custom: radii must increase");
  for (double t : times) require(t > 0.0, "AnnulusSchedule::custom: times must be positive");
  AnnulusSchedule s;
  s.d_ = d;
  s.p_ = p;
  s.custom_ = true;
  s.radii_ = std::move(radii);
  s.times_ = std::move(times);
  s.finish();
  return s;
}

void AnnulusSchedule::finish() {
  masses_.resize(times_.size());
  for (int k = 1; k <= m(); ++k) masses_[k - 1] = gaussian_shell_mass(radii_[k - 1], radii_[k], d_);
  ball_mass_ = gaussian_ball_mass(R(), d_);
}

double AnnulusSchedule::radius(int k) const {
  require(k >= 0 && k <= m(), "AnnulusSchedule::radius: index out of range");
  return radii_[k];
}

double AnnulusSchedule::time(int k) const {
  require(k >= 1 && k <= m(), "AnnulusSchedule::time: index out of range");
  return times_[k - 1];
}

double AnnulusSchedule::split_time(int k) const {
  require(k >= 1 && k <= m(), "AnnulusSchedule::split_time: index out of range");
  return 1.0 / std::sqrt(static_cast<double>(k));
}

double AnnulusSchedule::mass(int k) const {
  require(k >= 1 && k <= m(), "AnnulusSchedule::mass: index out of range");
  return masses_[k - 1];
}

int AnnulusSchedule::annulus_of(double norm) const {
  require(norm >= 0.0, "AnnulusSchedule::annulus_of: negative norm");
  const auto it = std::upper_bound(radii_.begin(), radii_.end(), norm);
  const auto k = static_cast<int>(it - radii_.begin());
  if (k > m()) throw InvalidArgument("AnnulusSchedule::annulus_of: point outside B_R");
  return k;
}

std::vector<std::string> AnnulusSchedule::invariant_violations() const {
  std::vector<std::string> out;
  if (radii_.front() != 0.0) out.push_back("r_0 != 0");
  for (int k = 1; k <= m(); ++k) {
    if (!(radii_[k] > radii_[k - 1])) out.push_back("radii not increasing at k=" + std::to_string(k));
    const double t = times_[k - 1];
    if (!(t > 0.0 && t < 1.0)) out.push_back("t_" + std::to_string(k) + " outside (0,1)");
  }
  if (custom_) return out;
  if (std::abs(R() - std::sqrt(2.0 * c_ * std::log(n_))) > 1e-12 * R()) out.push_back("R != sqrt(2c log n)");
  if (variant_ == Variant::general_p) {
    for (int k = 2; k <= m(); ++k)
      if (!(times_[k - 1] > times_[k - 2])) out.push_back("t_k not increasing at k=" + std::to_string(k));
    const double cap = std::pow(n_, -2.0 * (1.0 - c_) / d_);
    if (times_.back() > cap * (1.0 + 1e-12)) out.push_back("t_m exceeds n^{-2(1-c)/d}");
    if (!(c_ > p_ / d_ && c_ < 1.0)) out.push_back("c outside (p/d, 1)");
  }
  return out;
}

double annulus_mass(int k, const AnnulusSchedule& schedule) { return schedule.mass(k); }

double annulus_surface(int k, const AnnulusSchedule& schedule) {
  require(k >= 1 && k <= schedule.m(), "annulus_surface: index out of range");
  double total = gaussian_sphere_measure(schedule.radius(k), schedule.d());
  if (k > 1) total += gaussian_sphere_measure(schedule.radius(k - 1), schedule.d());
  return total;
}

}  // namespace gaussmatch::smoothing
