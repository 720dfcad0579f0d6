#include "gaussmatch/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>

#include <Eigen/Eigenvalues>

namespace gaussmatch {
namespace {

GaussHermiteRule compute_rule(int n) {
  // Newton polish in long double on orthonormal Hermite polynomials, weight e^{-x^2}.
  using ld = long double;
  const ld pim4 = 0.751125544464942482861L;  // pi^{-1/4}
  std::vector<ld> x(n), w(n);
  const int m = (n + 1) / 2;
  // Golub-Welsch eigenvalues of the Jacobi matrix as starting points, largest first
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) J(j, j - 1) = J(j - 1, j) = std::sqrt(j / 2.0);
  const Eigen::VectorXd guesses = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(J, Eigen::EigenvaluesOnly).eigenvalues();
  ld z = 0;
  for (int i = 0; i < m; ++i) {
    z = guesses(n - 1 - i);
    ld pp = 0;
    for (int it = 0; it < 100; ++it) {
      ld p1 = pim4, p2 = 0;
      for (int j = 0; j < n; ++j) {
        const ld p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0L / (j + 1)) * p2 - std::sqrt(static_cast<ld>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0L * n) * p2;
      const ld z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-17L * std::max<ld>(1, std::abs(z))) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0L / (pp * pp);
    w[n - 1 - i] = w[i];
  }
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const ld sqrt_pi = std::sqrt(std::numbers::pi_v<long double>);
  for (int i = 0; i < n; ++i) {
    rule.nodes[n - 1 - i] = static_cast<double>(x[i] * std::numbers::sqrt2_v<long double>);
    rule.weights[n - 1 - i] = static_cast<double>(w[i] / sqrt_pi);
  }
  return rule;
}

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  double fv1[7], fv2[7];
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = f(center - dx), f2 = f(center + dx);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = f(center - dx), f2 = f(center + dx);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  const double result = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(eps * 50.0 * resabs, err);
  return {a, b, result, err};
}

}  // namespace

const GaussHermiteRule& gauss_hermite_rule(int n) {
  require(n >= 2 && n <= 400, "gauss_hermite_rule: node count must lie in [2, 400]");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussHermiteRule>(compute_rule(n));
  return *slot;
}

double gauss_hermite_integrate(const std::function<double(double)>& f, int nodes) {
  const auto& rule = gauss_hermite_rule(nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = f(rule.nodes[i]);
    if (!std::isfinite(v)) throw InvalidArgument("gauss_hermite_integrate: integrand not finite at a node");
    sum += rule.weights[i] * v;
  }
  return sum;
}

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                              double abs_tol, int max_subdivisions, const std::vector<double>& breakpoints) {
  require(!std::isnan(a) && !std::isnan(b) && std::isfinite(a), "integrate_adaptive: invalid bounds");
  if (std::isinf(b)) {
    require(b > 0, "integrate_adaptive: upper bound must be +inf or finite");
    std::vector<double> mapped;
    for (double x : breakpoints)
      if (x > a) mapped.push_back((x - a) / (1.0 + x - a));
    auto g = [&](double u) {
      if (u >= 1.0) return 0.0;
      const double one_minus = 1.0 - u;
      return f(a + u / one_minus) / (one_minus * one_minus);
    };
    return integrate_adaptive(g, 0.0, 1.0, rel_tol, abs_tol, max_subdivisions, mapped);
  }
  if (a == b) return {0.0, 0.0, 0, true};
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::vector<double> cuts{a};
  std::vector<double> sorted = breakpoints;
  std::sort(sorted.begin(), sorted.end());
  for (double x : sorted)
    if (x > cuts.back() && x < b) cuts.push_back(x);
  cuts.push_back(b);

  std::priority_queue<Segment> heap;
  double total = 0.0, total_err = 0.0;
  int evaluations = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment s = kronrod15(f, cuts[i], cuts[i + 1]);
    evaluations += 15;
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }
  int segments = static_cast<int>(heap.size());
  auto tolerance = [&] { return std::max(abs_tol, rel_tol * std::abs(total)); };
  while (total_err > tolerance() && segments < max_subdivisions) {
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted at machine precision
    heap.pop();
    Segment left = kronrod15(f, worst.a, mid);
    Segment right = kronrod15(f, mid, worst.b);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
  }
  // Re-sum to shed accumulated cancellation in the running totals.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  QuadResult r;
  r.value = sign * total;
  r.error = total_err;
  r.evaluations = evaluations;
  r.converged = std::isfinite(total) && total_err <= std::max(abs_tol, rel_tol * std::abs(total));
  return r;
}

double integrate_checked(const std::function<double(double)>& f, double a, double b, const QuadSettings& q,
                         const std::string& what, const std::vector<double>& breakpoints) {
  const QuadResult r = integrate_adaptive(f, a, b, q, breakpoints);
  if (!r.converged) throw QuadratureError(what + ": quadrature did not converge", r.error);
  return r.value;
}

}  // namespace gaussmatch
