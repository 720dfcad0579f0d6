#pragma once

#include <nlohmann/json.hpp>

#include "gaussmatch/quadrature.hpp"

namespace gaussmatch::bounds {

struct LowerBoundConfig {
  double n = 0.0;
  int d = 1;
  double t = 0.0;      // regularization time
  double R = 0.0;      // truncation radius
  double c = 0.5;      // truncation level of the fluctuation
  double delta = 0.0;
  double alpha = 8.0;

  /// t = n^{-1/d}, R^2 = log(n)/64, c = 1/2, delta = 1/n, alpha = 8.
  static LowerBoundConfig defaults(double n, int d);
  void validate() const;
};

/// int_{B_R} p_s(x,x) dmu(x) / mu(B_R) = (1-a)^{-d} F_d(lambda R^2) / F_d(R^2),
/// a = e^{-s}, lambda = (1-a)/(1+a), F_d the chi-square(d) CDF. R may be +inf.
double restricted_diagonal_mass(double s, double R, int d);

struct TraceIntegralResult {
  double value = 0.0;
  QuadDiagnostics diagnostics;
};

/// I(t, R) = int_{2t}^inf [restricted_diagonal_mass(s) - 1] ds.
TraceIntegralResult trace_integral(const LowerBoundConfig& cfg, const QuadSettings& quad = {1, 4000, 1e-8, 0.0});

/// I / (2n). The O(1/n) error terms are not subtracted.
double lower_bound_main_term(const LowerBoundConfig& cfg, const QuadSettings& quad = {1, 4000, 1e-8, 0.0});

/// Error terms that accompany the main term. Only their order is known: the
/// Rosenthal constant C_{2 alpha} has no computable value, so the last term
/// is reported per unit constant and in log10. Uncertified.
struct LowerBoundCorrections {
  double explicit_terms = 0.0;         // 1/n + 24 delta / (n (1-a)^d)
  double log10_rosenthal_per_unit = 0.0;  // log10 of 4^{alpha+3} (1 + e^{16 alpha R^2}) / (c^{2(alpha-1)} delta [(1-a^2)^{d/2} n]^alpha)
  bool certified = false;
};
LowerBoundCorrections lower_bound_corrections(const LowerBoundConfig& cfg);

/// d = 2: I / (R^2 log(1/t)); d = 1: I / log(R^2).
double growth_ratio(const LowerBoundConfig& cfg, const QuadSettings& quad = {1, 4000, 1e-8, 0.0});

/// JSON row {n, d, t, R, I, main_term}.
nlohmann::json to_json(const LowerBoundConfig& cfg, const TraceIntegralResult& I);

}  // namespace gaussmatch::bounds
