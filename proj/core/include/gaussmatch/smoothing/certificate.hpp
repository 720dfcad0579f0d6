#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "gaussmatch/quadrature.hpp"
#include "gaussmatch/rng.hpp"
#include "gaussmatch/sampling.hpp"
#include "gaussmatch/smoothing/schedule.hpp"

namespace gaussmatch::smoothing {

struct CertificateOptions {
  Variant variant = Variant::general_p;
  std::optional<double> c;
  double min_n = 16.0;
  int y_samples = 2000;  // Monte Carlo size for p != 2
  QuadSettings quad{1, 2000, 1e-6, 1e-14};
  bool include_centering = true;
};

/// Realization-wise bound on W_p^p(mu_n, mu) assembled from
/// localization, regularization and negative Sobolev terms.
struct CertificateReport {
  std::size_t n = 0;
  int d = 0;
  double p = 0.0;
  Variant variant = Variant::general_p;
  double c = 0.0;
  double R = 0.0;
  int m = 0;

  double loc = 0.0;  // W_p^p(mu_n, mu_n^R) bound
  double reg = 0.0;  // W_p^p(mu_n^R, smoothed) bound
  double sob = 0.0;  // W_p^p(smoothed, mu) bound
  double centered = 0.0;     // ||f - 1||^p in H^{-1,p} (Monte Carlo for p != 2)
  double centered_se = 0.0;
  double centering = 0.0;    // centering field in the same units
  double sobolev_prefactor = 0.0;  // p^p
  double split_constant = 0.0;     // 2^{p-1}
  double total = 0.0;

  std::uint64_t seed = 0;
  int resampled = 0;
  bool riesz_caveat = false;  // p != 2: gradient norm replaced by (-L)^{1/2}
  std::string centered_method;
  QuadDiagnostics quad;
};

/// localize -> assign_times -> Sobolev norm (+ centering) -> assembly
/// total = (loc^{1/p} + reg^{1/p} + sob^{1/p})^p.
CertificateReport upper_bound_certificate(const EmpiricalSample& sample, double p, const CertificateOptions& options,
                                          Stream& stream);

nlohmann::json to_json(const CertificateReport& report);

}  // namespace gaussmatch::smoothing
