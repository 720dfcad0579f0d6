#include "gaussmatch/smoothing/certificate.hpp"

#include <cmath>
#include <numbers>

#include "gaussmatch/smoothing/centering.hpp"
#include "gaussmatch/smoothing/smoothed.hpp"

namespace gaussmatch::smoothing {

CertificateReport upper_bound_certificate(const EmpiricalSample& sample, double p, const CertificateOptions& options,
                                          Stream& stream) {
  const auto n = static_cast<double>(sample.size());
  require(n >= options.min_n, "upper_bound_certificate: n = " + std::to_string(sample.size()) +
                                  " is below the minimum " + std::to_string(options.min_n));
  const int d = static_cast<int>(sample.dim());
  const AnnulusSchedule schedule = AnnulusSchedule::build(n, d, p, options.variant, options.c, options.min_n);

  CertificateReport rep;
  rep.n = sample.size();
  rep.d = d;
  rep.p = p;
  rep.variant = options.variant;
  rep.c = schedule.c();
  rep.R = schedule.R();
  rep.m = schedule.m();
  rep.seed = sample.stream_key;
  rep.sobolev_prefactor = std::pow(p, p);
  rep.split_constant = std::pow(2.0, p - 1.0);
  rep.riesz_caveat = p != 2.0;

  Stream loc_stream = stream.split(1);
  const Localization loc = localize(sample, schedule, loc_stream);
  rep.loc = loc.cost;
  rep.resampled = loc.sample.resampled;

  const SmoothedEmpirical sm = assign_times(loc.sample, schedule);
  rep.reg = regularization_cost(sm, p, options.quad);

  if (p == 2.0) {
    const NormValue h = h12_norm_sq(sm, options.quad);
    rep.centered = h.value;
    rep.quad.merge(h.diagnostics);
    rep.centered_method = "closed-form pair sum";
  } else {
    Stream mc_stream = stream.split(2);
    const NormValue h = h1p_norm_estimate(sm, p, options.y_samples, mc_stream, options.quad);
    rep.centered = h.value;
    rep.centered_se = h.standard_error;
    rep.quad.merge(h.diagnostics);
    rep.centered_method = "monte carlo";
  }

  if (options.include_centering) {
    const CenteringValue cv = centering_norm(schedule, p, options.quad);
    rep.quad.merge(cv.diagnostics);
    // p = 2: ||phi||^2 = 2 int int (P_s phi)^2; else the 1/sqrt(pi) of the
    // subordination formula is applied here.
    rep.centering = p == 2.0 ? 2.0 * cv.value : std::pow(std::numbers::pi, -0.5 * p) * cv.value;
  }

  rep.sob = rep.sobolev_prefactor * rep.split_constant * (rep.centered + rep.centering);
  const double root = std::pow(rep.loc, 1.0 / p) + std::pow(rep.reg, 1.0 / p) + std::pow(rep.sob, 1.0 / p);
  rep.total = std::pow(root, p);
  return rep;
}

nlohmann::json to_json(const CertificateReport& r) {
  return {
      {"n", r.n},
      {"d", r.d},
      {"p", r.p},
      {"variant", to_string(r.variant)},
      {"c", r.c},
      {"R", r.R},
      {"m", r.m},
      {"loc", r.loc},
      {"reg", r.reg},
      {"sob", r.sob},
      {"centered", r.centered},
      {"centered_se", r.centered_se},
      {"centering", r.centering},
      {"sobolev_prefactor", r.sobolev_prefactor},
      {"split_constant", r.split_constant},
      {"total", r.total},
      {"seed", r.seed},
      {"resampled", r.resampled},
      {"riesz_caveat", r.riesz_caveat},
      {"centered_method", r.centered_method},
      {"quad_diagnostics",
       {{"calls", r.quad.calls},
        {"evaluations", r.quad.evaluations},
        {"max_error", r.quad.max_error},
        {"all_converged", r.quad.all_converged}}},
  };
}

}  // namespace gaussmatch::smoothing
