#include "gaussmatch/smoothing/smoothed.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "gaussmatch/mehler.hpp"

namespace gaussmatch::smoothing {
namespace {

// Atoms grouped by their (exactly equal) times.
struct TimeGroups {
  std::vector<double> times;                // one per group
  std::vector<std::size_t> begin;           // offsets into the sorted arrays, size groups + 1
  std::vector<double> coords;               // atoms reordered by group, row-major
  std::vector<double> norms_sq;
  int d = 0;

  explicit TimeGroups(const SmoothedEmpirical& sm) : d(sm.dim()) {
    std::map<double, std::vector<std::size_t>> by_time;
    for (std::size_t i = 0; i < sm.size(); ++i) by_time[sm.times()[i]].push_back(i);
    begin.push_back(0);
    for (const auto& [t, members] : by_time) {
      times.push_back(t);
      for (std::size_t i : members) {
        const auto x = sm.atoms()[i];
        coords.insert(coords.end(), x.begin(), x.end());
        norms_sq.push_back(squared_norm(x));
      }
      begin.push_back(norms_sq.size());
    }
  }
  std::size_t groups() const { return times.size(); }
  const double* atom(std::size_t i) const { return coords.data() + i * d; }
};

double min_time(const SmoothedEmpirical& sm) { return *std::min_element(sm.times().begin(), sm.times().end()); }

// Geometric breakpoints from `start` up to (not including) `stop`.
std::vector<double> geometric_breaks(double start, double stop) {
  std::vector<double> out;
  for (double x = start; x < stop; x *= 2.0) out.push_back(x);
  return out;
}

}  // namespace

Localization localize(const EmpiricalSample& sample, const AnnulusSchedule& schedule, Stream& stream) {
  require(!sample.localized, "localize: sample is already localized");
  require(static_cast<int>(sample.dim()) == schedule.d(), "localize: dimension differs from schedule");
  Localization out;
  out.sample = sample;
  const double R = schedule.R();
  const double p = schedule.p();
  double total = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    auto x = out.sample.points[i];
    const double nx2 = squared_norm(x);
    if (nx2 >= R * R) {
      total += p == 2.0 ? nx2 : std::pow(nx2, 0.5 * p);
      sample_restricted_gaussian(x, R, stream);
      ++out.sample.resampled;
    }
  }
  out.sample.localized = true;
  out.sample.radius = R;
  out.cost = std::pow(2.0, p) * total / static_cast<double>(sample.size());
  return out;
}

SmoothedEmpirical::SmoothedEmpirical(PointCloud atoms, std::vector<double> times)
    : atoms_(std::move(atoms)), times_(std::move(times)) {
  require(atoms_.size() > 0, "SmoothedEmpirical: no atoms");
  require(times_.size() == atoms_.size(), "SmoothedEmpirical: one time per atom");
  for (double t : times_) require(t > 0.0 && std::isfinite(t), "SmoothedEmpirical: times must be positive");
}

SmoothedEmpirical::SmoothedEmpirical(PointCloud atoms, std::vector<double> times, AnnulusSchedule schedule,
                                     std::vector<int> annuli)
    : SmoothedEmpirical(std::move(atoms), std::move(times)) {
  schedule_ = std::move(schedule);
  annuli_ = std::move(annuli);
}

SmoothedEmpirical assign_times(const EmpiricalSample& localized, const AnnulusSchedule& schedule) {
  require(static_cast<int>(localized.dim()) == schedule.d(), "assign_times: dimension differs from schedule");
  std::vector<double> times(localized.size());
  std::vector<int> annuli(localized.size());
  for (std::size_t i = 0; i < localized.size(); ++i) {
    const int k = schedule.annulus_of(std::sqrt(squared_norm(localized.points[i])));
    annuli[i] = k;
    times[i] = schedule.time(k);
  }
  return SmoothedEmpirical(localized.points, std::move(times), schedule, std::move(annuli));
}

double density_eval(const SmoothedEmpirical& sm, std::span<const double> y) {
  if (static_cast<int>(y.size()) != sm.dim()) throw DimensionMismatch("density_eval: dimension mismatch");
  require(all_finite(y), "density_eval: non-finite point");
  const double yy = squared_norm(y);
  double s = 0.0;
  for (std::size_t i = 0; i < sm.size(); ++i) {
    const auto x = sm.atoms()[i];
    s += std::exp(mehler_log_kernel(sm.times()[i], sm.dim(), squared_norm(x), yy, squared_distance(x, y)));
  }
  return s / static_cast<double>(sm.size());
}

double fluctuation_eval(const SmoothedEmpirical& sm, std::span<const double> y, double s) {
  if (static_cast<int>(y.size()) != sm.dim()) throw DimensionMismatch("fluctuation_eval: dimension mismatch");
  require(s >= 0.0, "fluctuation_eval: s >= 0");
  if (std::isinf(s)) return 0.0;
  const double yy = squared_norm(y);
  double total = 0.0;
  for (std::size_t i = 0; i < sm.size(); ++i) {
    const auto x = sm.atoms()[i];
    total += std::expm1(mehler_log_kernel(s + sm.times()[i], sm.dim(), squared_norm(x), yy, squared_distance(x, y)));
  }
  return total / static_cast<double>(sm.size());
}

double regularization_cost(const SmoothedEmpirical& sm, double p, const QuadSettings& quad) {
  require(p >= 1.0, "regularization_cost: p >= 1");
  double total = 0.0;
  for (std::size_t i = 0; i < sm.size(); ++i) {
    const auto x = sm.atoms()[i];
    if (p == 2.0)
      total += kernel_second_moment(sm.times()[i], sm.dim(), squared_norm(x));
    else
      total += kernel_p_cost(sm.times()[i], sm.dim(), std::sqrt(squared_norm(x)), p, quad);
  }
  return total / static_cast<double>(sm.size());
}

NormValue h12_norm_sq(const SmoothedEmpirical& sm, const QuadSettings& quad) {
  const TimeGroups groups(sm);
  const int d = groups.d;
  const double n = static_cast<double>(sm.size());

  // F(s) = (1/n^2) sum_{i,j} [p_{2s+T_i+T_j}(X_i, X_j) - 1]
  auto F = [&](double s) {
    double total = 0.0;
    for (std::size_t g = 0; g < groups.groups(); ++g) {
      for (std::size_t h = g; h < groups.groups(); ++h) {
        const double tau = 2.0 * s + groups.times[g] + groups.times[h];
        const double a = std::exp(-tau);
        const double s2 = -std::expm1(-2.0 * tau);
        const double log_pref = -0.5 * d * std::log(s2);
        const double c_dist = -a / (2.0 * s2);
        const double c_norm = a / (2.0 * (1.0 + a));
        double block = 0.0;
        for (std::size_t i = groups.begin[g]; i < groups.begin[g + 1]; ++i) {
          const double* xi = groups.atom(i);
          const double base = log_pref + c_norm * groups.norms_sq[i];
          const std::size_t j0 = g == h ? i + 1 : groups.begin[h];
          double row = 0.0;
          if (a > 1e-4) {
            for (std::size_t j = j0; j < groups.begin[h + 1]; ++j) {
              const double* xj = groups.atom(j);
              double dist = 0.0;
              for (int k = 0; k < d; ++k) {
                const double diff = xi[k] - xj[k];
                dist += diff * diff;
              }
              row += std::exp(base + c_dist * dist + c_norm * groups.norms_sq[j]);
            }
            row -= static_cast<double>(groups.begin[h + 1] - j0);
          } else {
            // kernel close to 1: keep the relative accuracy of p - 1
            for (std::size_t j = j0; j < groups.begin[h + 1]; ++j) {
              const double* xj = groups.atom(j);
              double dist = 0.0;
              for (int k = 0; k < d; ++k) {
                const double diff = xi[k] - xj[k];
                dist += diff * diff;
              }
              row += std::expm1(base + c_dist * dist + c_norm * groups.norms_sq[j]);
            }
          }
          block += 2.0 * row;
          if (g == h) block += std::expm1(base + c_norm * groups.norms_sq[i]);
        }
        total += block;
      }
    }
    return total / (n * n);
  };

  NormValue out;
  const double tau_min = 2.0 * min_time(sm);
  std::vector<double> breaks = geometric_breaks(tau_min / 4.0, 1.0);
  const QuadResult head = integrate_adaptive(F, 0.0, 1.0, quad, breaks);
  out.diagnostics.record(head);
  auto tail_integrand = [&](double v) { return v <= 0.0 ? 0.0 : F(-std::log(v)) / v; };
  const QuadResult tail = integrate_adaptive(tail_integrand, 0.0, std::exp(-1.0), quad);
  out.diagnostics.record(tail);
  if (!head.converged || !tail.converged)
    throw QuadratureError("h12_norm_sq: s-integral did not converge", head.error + tail.error);
  out.value = 2.0 * (head.value + tail.value);
  return out;
}

NormValue h12_norm_sq_monte_carlo(const SmoothedEmpirical& sm, int y_samples, int s_points, Stream& stream) {
  require(y_samples >= 2 && s_points >= 2, "h12_norm_sq_monte_carlo: need at least 2 samples and 2 s-points");
  const int d = sm.dim();
  const double s_min = 1e-2 * min_time(sm);
  const double s_max = 25.0;
  std::vector<double> grid{0.0};
  for (int k = 0; k < s_points; ++k)
    grid.push_back(s_min * std::pow(s_max / s_min, static_cast<double>(k) / (s_points - 1)));

  // log p_{s+T}(x,y) = lp - c1 (|x|^2 + |y|^2) + c2 x.y, tabulated per (s, T)
  const std::size_t n = sm.size();
  std::vector<double> xx(n);
  for (std::size_t i = 0; i < n; ++i) xx[i] = squared_norm(sm.atoms()[i]);
  struct Coef {
    double lp, c1, c2;
  };
  std::vector<Coef> coef(grid.size() * n);
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const double tau = grid[k] + sm.times()[i];
      const double a = std::exp(-tau), one_minus_a2 = -std::expm1(-2.0 * tau);
      coef[k * n + i] = {-0.5 * d * std::log(one_minus_a2), 0.5 * a * a / one_minus_a2, a / one_minus_a2};
    }

  std::vector<double> y(d), xy(n), values(grid.size());
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < y_samples; ++r) {
    for (double& c : y) c = stream.normal();
    const double yy = squared_norm(y);
    for (std::size_t i = 0; i < n; ++i) xy[i] = dot(sm.atoms()[i], y);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      double v = 0.0;
      const Coef* ck = coef.data() + k * n;
      for (std::size_t i = 0; i < n; ++i) v += std::expm1(ck[i].lp - ck[i].c1 * (xx[i] + yy) + ck[i].c2 * xy[i]);
      v /= static_cast<double>(n);
      values[k] = v * v;
    }
    double integral = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) integral += 0.5 * (grid[k] - grid[k - 1]) * (values[k] + values[k - 1]);
    integral *= 2.0;
    sum += integral;
    sum_sq += integral * integral;
  }
  NormValue out;
  const double N = y_samples;
  out.value = sum / N;
  out.standard_error = std::sqrt(std::max(0.0, sum_sq / N - out.value * out.value) / (N - 1.0));
  return out;
}

double inverse_sqrt_generator_fluctuation(const SmoothedEmpirical& sm, std::span<const double> y,
                                          const QuadSettings& quad, QuadDiagnostics* diag) {
  auto integrand = [&](double u) { return fluctuation_eval(sm, y, u * u); };
  const double root_t = std::sqrt(min_time(sm));
  std::vector<double> breaks = geometric_breaks(0.5 * root_t, 1.0);
  const QuadResult head = integrate_adaptive(integrand, 0.0, 1.0, quad, breaks);
  // Tail |P_s g| decays at least like e^{-s/2}: stop where the remainder is
  // below 1e-12 of the accumulated value.
  const double at_one = std::abs(fluctuation_eval(sm, y, 1.0));
  double u_max = 1.0;
  if (at_one > 0.0) {
    const double target = 1e-12 * std::max(std::abs(head.value), 1e-300);
    const double need = 1.0 + 2.0 * std::log(std::max(1.0, std::sqrt(std::numbers::e) * at_one / target));
    u_max = std::min(12.0, std::sqrt(need));
  }
  QuadResult tail{0.0, 0.0, 0, true};
  if (u_max > 1.0) tail = integrate_adaptive(integrand, 1.0, u_max, quad);
  if (diag) {
    diag->record(head);
    diag->record(tail);
  }
  if (!head.converged || !tail.converged)
    throw QuadratureError("h1p_norm_estimate: inner integral did not converge", head.error + tail.error);
  return 2.0 / std::sqrt(std::numbers::pi) * (head.value + tail.value);
}

NormValue h1p_norm_estimate(const SmoothedEmpirical& sm, double p, int y_samples, Stream& stream,
                            const QuadSettings& quad, double max_standard_error) {
  require(p >= 1.0, "h1p_norm_estimate: p >= 1");
  require(y_samples >= 1000, "h1p_norm_estimate: need at least 1000 y-samples");
  const int d = sm.dim();
  std::vector<double> y(d);
  NormValue out;
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < y_samples; ++r) {
    for (double& c : y) c = stream.normal();
    const double G = inverse_sqrt_generator_fluctuation(sm, y, quad, &out.diagnostics);
    const double v = std::pow(std::abs(G), p);
    sum += v;
    sum_sq += v * v;
  }
  const double N = y_samples;
  out.value = sum / N;
  out.standard_error = std::sqrt(std::max(0.0, sum_sq / N - out.value * out.value) / (N - 1.0));
  if (max_standard_error > 0.0 && out.standard_error > max_standard_error)
    throw QuadratureError("h1p_norm_estimate: standard error above the requested cap", out.standard_error);
  return out;
}

}  // namespace gaussmatch::smoothing
