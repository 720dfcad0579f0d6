#include "gaussmatch/bounds/trace.hpp"

#include <cmath>
#include <numbers>

#include "gaussmatch/common.hpp"
#include "gaussmatch/special.hpp"

namespace gaussmatch::bounds {

LowerBoundConfig LowerBoundConfig::defaults(double n, int d) {
  require(n > 1.0, "LowerBoundConfig::defaults: n > 1");
  LowerBoundConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.t = std::pow(n, -1.0 / d);
  cfg.R = std::sqrt(std::log(n) / 64.0);
  cfg.c = 0.5;
  cfg.delta = 1.0 / n;
  cfg.alpha = 8.0;
  return cfg;
}

void LowerBoundConfig::validate() const {
  require(n > 0.0 && d >= 1, "LowerBoundConfig: need n > 0 and d >= 1");
  require(t > 0.0, "LowerBoundConfig: t > 0");
  require(R > 0.0, "LowerBoundConfig: R > 0");
  require(c > 0.0 && c <= 0.5, "LowerBoundConfig: c must lie in (0, 1/2]");
  require(alpha > 1.0, "LowerBoundConfig: alpha > 1");
  require(delta > 0.0, "LowerBoundConfig: delta > 0");
}

namespace {

double log_restricted_diagonal_mass(double s, double R, int d) {
  const double one_minus_a = -std::expm1(-s);
  double log_ratio = 0.0;
  if (std::isfinite(R)) {
    const double lambda = std::tanh(0.5 * s);
    log_ratio = std::log(chi_square_cdf(lambda * R * R, d)) - std::log(chi_square_cdf(R * R, d));
  }
  return -d * std::log(one_minus_a) + log_ratio;
}

}  // namespace

double restricted_diagonal_mass(double s, double R, int d) {
  require(s > 0.0, "restricted_diagonal_mass: s > 0");
  require(R > 0.0, "restricted_diagonal_mass: R > 0");
  require(d >= 1, "restricted_diagonal_mass: d >= 1");
  return std::exp(log_restricted_diagonal_mass(s, R, d));
}

TraceIntegralResult trace_integral(const LowerBoundConfig& cfg, const QuadSettings& quad) {
  cfg.validate();
  TraceIntegralResult out;
  const double s0 = 2.0 * cfg.t;
  auto excess = [&](double s) { return std::expm1(log_restricted_diagonal_mass(s, cfg.R, cfg.d)); };
  double total = 0.0;
  double tail_start = s0;
  if (s0 < 1.0) {
    // s = e^w on [2t, 1]
    auto g = [&](double w) {
      const double s = std::exp(w);
      return s * excess(s);
    };
    const QuadResult head = integrate_adaptive(g, std::log(s0), 0.0, quad);
    out.diagnostics.record(head);
    total += head.value;
    tail_start = 1.0;
  }
  // v = e^{-s} on [tail_start, inf)
  auto h = [&](double v) { return v <= 0.0 ? 0.0 : excess(-std::log(v)) / v; };
  const QuadResult tail = integrate_adaptive(h, 0.0, std::exp(-tail_start), quad);
  out.diagnostics.record(tail);
  total += tail.value;
  if (!out.diagnostics.all_converged) throw QuadratureError("trace_integral: quadrature did not converge", out.diagnostics.max_error);
  out.value = total;
  return out;
}

double lower_bound_main_term(const LowerBoundConfig& cfg, const QuadSettings& quad) {
  return trace_integral(cfg, quad).value / (2.0 * cfg.n);
}

LowerBoundCorrections lower_bound_corrections(const LowerBoundConfig& cfg) {
  cfg.validate();
  LowerBoundCorrections out;
  const double one_minus_a = -std::expm1(-cfg.t);
  const double one_minus_a2 = -std::expm1(-2.0 * cfg.t);
  out.explicit_terms = 1.0 / cfg.n + 24.0 * cfg.delta / (cfg.n * std::pow(one_minus_a, cfg.d));
  const double x = 16.0 * cfg.alpha * cfg.R * cfg.R;
  const double log1p_exp = x > 30.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
  const double ln = (cfg.alpha + 3.0) * std::log(4.0) + log1p_exp - 2.0 * (cfg.alpha - 1.0) * std::log(cfg.c) -
                    std::log(cfg.delta) - cfg.alpha * (0.5 * cfg.d * std::log(one_minus_a2) + std::log(cfg.n));
  out.log10_rosenthal_per_unit = ln / std::numbers::ln10;
  return out;
}

double growth_ratio(const LowerBoundConfig& cfg, const QuadSettings& quad) {
  const double I = trace_integral(cfg, quad).value;
  if (cfg.d == 2) return I / (cfg.R * cfg.R * std::log(1.0 / cfg.t));
  if (cfg.d == 1) return I / std::log(cfg.R * cfg.R);
  throw InvalidArgument("growth_ratio: defined for d = 1 and d = 2");
}

nlohmann::json to_json(const LowerBoundConfig& cfg, const TraceIntegralResult& I) {
  return {{"n", cfg.n}, {"d", cfg.d}, {"t", cfg.t}, {"R", cfg.R}, {"I", I.value}, {"main_term", I.value / (2.0 * cfg.n)}};
}

}  // namespace gaussmatch::bounds
