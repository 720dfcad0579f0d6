#include "gaussmatch/smoothing/centering.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include "gaussmatch/special.hpp"

namespace gaussmatch::smoothing {
namespace {

constexpr double kRadialSpan = 12.0;

std::vector<double> radial_breaks(const AnnulusSchedule& schedule) {
  std::vector<double> breaks(schedule.radii().begin() + 1, schedule.radii().end());
  breaks.push_back(std::sqrt(static_cast<double>(schedule.d())));
  return breaks;
}

double radial_upper(const AnnulusSchedule& schedule) {
  return std::max(schedule.R(), std::sqrt(static_cast<double>(schedule.d()))) + kRadialSpan;
}

struct CacheEntry {
  AnnulusSchedule schedule;
  double p;
  double rel_tol;
  CenteringValue value;
};

std::mutex cache_mutex;
std::vector<CacheEntry> cache;

CenteringValue compute(const AnnulusSchedule& schedule, double p, const QuadSettings& quad) {
  const int d = schedule.d();
  const double upper = radial_upper(schedule);
  const std::vector<double> breaks = radial_breaks(schedule);
  QuadSettings inner = quad;
  inner.rel_tol = 0.1 * quad.rel_tol;
  CenteringValue out;

  if (p == 2.0) {
    // int_0^inf E(s) ds with E(s) = int chi_d(rho) (P_s phi(rho))^2 d rho
    auto energy = [&](double s) {
      auto g = [&](double rho) {
        const double v = centering_field(schedule, rho, s);
        return chi_pdf(rho, d) * v * v;
      };
      const QuadResult r = integrate_adaptive(g, 0.0, upper, inner, breaks);
      out.diagnostics.record(r);
      return r.value;
    };
    std::vector<double> s_breaks;
    for (double x = 0.25 * schedule.time(1); x < 1.0; x *= 2.0) s_breaks.push_back(x);
    const QuadResult head = integrate_adaptive(energy, 0.0, 1.0, quad, s_breaks);
    auto tail = [&](double v) { return v <= 0.0 ? 0.0 : energy(-std::log(v)) / v; };
    const QuadResult rest = integrate_adaptive(tail, 0.0, std::exp(-1.0), quad);
    out.diagnostics.record(head);
    out.diagnostics.record(rest);
    if (!head.converged || !rest.converged)
      throw QuadratureError("centering_norm: s-integral did not converge", head.error + rest.error);
    out.value = head.value + rest.value;
    return out;
  }

  // Psi(rho) = int_0^inf s^{-1/2} P_s phi ds = 2 int_0^inf P_{u^2} phi du
  auto psi = [&](double rho) {
    auto h = [&](double u) { return centering_field(schedule, rho, u * u); };
    std::vector<double> u_breaks;
    for (double x = 0.5 * std::sqrt(schedule.time(1)); x < 1.0; x *= 2.0) u_breaks.push_back(x);
    const QuadResult head = integrate_adaptive(h, 0.0, 1.0, inner, u_breaks);
    // P_s phi is radial with no degree-0 or degree-1 Hermite part, so it decays like e^{-2s}.
    const QuadResult rest = integrate_adaptive(h, 1.0, 6.0, inner);
    out.diagnostics.record(head);
    out.diagnostics.record(rest);
    return 2.0 * (head.value + rest.value);
  };
  auto g = [&](double rho) { return chi_pdf(rho, d) * std::pow(std::abs(psi(rho)), p); };
  const QuadResult r = integrate_adaptive(g, 0.0, upper, quad, breaks);
  out.diagnostics.record(r);
  if (!r.converged || !out.diagnostics.all_converged)
    throw QuadratureError("centering_norm: radial integral did not converge", r.error);
  out.value = r.value;
  return out;
}

}  // namespace

double semigroup_annulus_indicator(double tau, double r_lo, double r_hi, double rho, int d) {
  require(tau >= 0.0 && rho >= 0.0, "semigroup_annulus_indicator: invalid arguments");
  if (tau == 0.0) return (rho >= r_lo && rho < r_hi) ? 1.0 : 0.0;
  const double a = std::exp(-tau);
  const double var = -std::expm1(-2.0 * tau);
  const double lambda = a * a * rho * rho / var;
  const double hi = noncentral_chi_square_cdf(r_hi * r_hi / var, d, lambda);
  const double lo = r_lo > 0.0 ? noncentral_chi_square_cdf(r_lo * r_lo / var, d, lambda) : 0.0;
  return hi - lo;
}

double centering_field(const AnnulusSchedule& schedule, double rho, double s) {
  double total = 0.0;
  for (int k = 1; k <= schedule.m(); ++k) {
    total += semigroup_annulus_indicator(s + schedule.time(k), schedule.radius(k - 1), schedule.radius(k), rho,
                                         schedule.d()) -
             schedule.mass(k);
  }
  return total / schedule.ball_mass();
}

double centering_mean(const AnnulusSchedule& schedule, double s, const QuadSettings& quad) {
  const int d = schedule.d();
  auto g = [&](double rho) { return chi_pdf(rho, d) * centering_field(schedule, rho, s); };
  return integrate_checked(g, 0.0, radial_upper(schedule), quad, "centering_mean", radial_breaks(schedule));
}

CenteringValue centering_norm(const AnnulusSchedule& schedule, double p, const QuadSettings& quad) {
  require(p >= 1.0, "centering_norm: p >= 1");
  {
    std::lock_guard lock(cache_mutex);
    for (const auto& e : cache)
      if (e.p == p && e.rel_tol == quad.rel_tol && e.schedule == schedule) return e.value;
  }
  CenteringValue v = compute(schedule, p, quad);
  std::lock_guard lock(cache_mutex);
  cache.push_back({schedule, p, quad.rel_tol, v});
  return v;
}

}  // namespace gaussmatch::smoothing
