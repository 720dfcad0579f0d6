#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gaussmatch/common.hpp"

namespace gaussmatch {

/// Nodes and weights for E[f(Z)], Z ~ N(0,1).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // sum to 1
};

/// Cached rule with `n` nodes (2 <= n <= 400). Thread safe.
const GaussHermiteRule& gauss_hermite_rule(int n);

/// E[f(Z)] for Z ~ N(0,1); exact for polynomials of degree <= 2n-1.
/// Throws InvalidArgument if f is not finite at a node.
double gauss_hermite_integrate(const std::function<double(double)>& f, int nodes);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod (7/15) integration on [a, b]. `b` may be +infinity,
/// handled by x = a + u/(1-u). Interior breakpoints seed the initial partition.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, double abs_tol, int max_subdivisions,
                              const std::vector<double>& breakpoints = {});

inline QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     const QuadSettings& q,
                                     const std::vector<double>& breakpoints = {}) {
  return integrate_adaptive(f, a, b, q.rel_tol, q.abs_tol, q.max_subdivisions, breakpoints);
}

/// As integrate_adaptive but throws QuadratureError when the tolerance is missed.
double integrate_checked(const std::function<double(double)>& f, double a, double b,
                         const QuadSettings& q, const std::string& what,
                         const std::vector<double>& breakpoints = {});

/// Running summary of quadrature calls, recorded in reports.
struct QuadDiagnostics {
  int calls = 0;
  long evaluations = 0;
  double max_error = 0.0;
  bool all_converged = true;

  void record(const QuadResult& r) {
    ++calls;
    evaluations += r.evaluations;
    if (r.error > max_error) max_error = r.error;
    all_converged = all_converged && r.converged;
  }
  void merge(const QuadDiagnostics& o) {
    calls += o.calls;
    evaluations += o.evaluations;
    if (o.max_error > max_error) max_error = o.max_error;
    all_converged = all_converged && o.all_converged;
  }
};

}  // namespace gaussmatch
