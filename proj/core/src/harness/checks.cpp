#include "gaussmatch/harness/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gaussmatch/bounds/inequalities.hpp"
#include "gaussmatch/bounds/trace.hpp"
#include "gaussmatch/gaussian_geometry.hpp"
#include "gaussmatch/hermite.hpp"
#include "gaussmatch/mehler.hpp"
#include "gaussmatch/ot/sinkhorn.hpp"
#include "gaussmatch/quadrature.hpp"
#include "gaussmatch/rng.hpp"
#include "gaussmatch/sampling.hpp"
#include "gaussmatch/smoothing/centering.hpp"
#include "gaussmatch/smoothing/certificate.hpp"
#include "gaussmatch/smoothing/smoothed.hpp"
#include "gaussmatch/special.hpp"
#include "gaussmatch/tilted_annulus.hpp"

namespace gaussmatch::harness {

bool CheckReport::all_passed() const { return failures() == 0; }

std::size_t CheckReport::failures() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return !e.passed; }));
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries)
    arr.push_back({{"suite", e.suite},
                   {"name", e.name},
                   {"passed", e.passed},
                   {"measured", e.measured},
                   {"threshold", e.threshold},
                   {"detail", e.detail}});
  return {{"entries", arr}, {"passed", all_passed()}, {"failures", failures()}, {"seconds", seconds}};
}

const std::vector<std::string>& check_suites() {
  static const std::vector<std::string> s = {"kernel", "spectral", "ot", "pipeline", "bounds"};
  return s;
}

namespace {

class Recorder {
 public:
  Recorder(CheckReport& report, std::string suite) : report_(report), suite_(std::move(suite)) {}

  /// passes when measured <= threshold
  void at_most(const std::string& name, double measured, double threshold, const std::string& detail = "") {
    add(name, measured <= threshold, measured, threshold, detail);
  }
  void at_least(const std::string& name, double measured, double threshold, const std::string& detail = "") {
    add(name, measured >= threshold, measured, threshold, detail);
  }
  void add(const std::string& name, bool passed, double measured, double threshold, const std::string& detail = "") {
    report_.entries.push_back({suite_, name, passed && std::isfinite(measured), measured, threshold, detail});
  }
  /// Runs body; an exception becomes a failed entry.
  template <class F>
  void guard(const std::string& name, F&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      add(name, false, std::nan(""), 0.0, std::string("exception: ") + e.what());
    }
  }

 private:
  CheckReport& report_;
  std::string suite_;
};

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Stream check_stream(const CheckOptions& opt, std::uint64_t tag) {
  return Stream::derive(opt.seed, 0, 0, StreamPurpose::check).split(tag);
}

const QuadSettings kTight{64, 4000, 1e-12, 1e-15};

// d = 1 Gaussian integral of f over the real line with breakpoints.
double gauss_integral_1d(const std::function<double(double)>& f, std::vector<double> breaks) {
  std::vector<double> b;
  for (double x : breaks)
    if (x > -40.0 && x < 40.0) b.push_back(x);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  auto g = [&](double y) { return f(y) * normal_pdf(y); };
  return integrate_adaptive(g, -40.0, 40.0, kTight, b).value;
}

// ---------------------------------------------------------------- kernel

void kernel_suite(CheckReport& report, const CheckOptions& opt) {
  Recorder rec(report, "kernel");

  rec.guard("normalization", [&] {
    double worst = 0.0;
    for (double t : {0.01, 0.1, 1.0, 5.0})
      for (double x : {-3.0, -0.5, 0.0, 2.0}) {
        const double a = std::exp(-t), sd = std::sqrt(-std::expm1(-2 * t));
        const double v = gauss_integral_1d(
            [&](double y) { return mehler_kernel(t, std::span<const double>(&x, 1), std::span<const double>(&y, 1)); },
            {a * x - 6 * sd, a * x - sd, a * x, a * x + sd, a * x + 6 * sd});
        worst = std::max(worst, std::abs(v - 1.0));
      }
    rec.at_most("normalization", worst, 1e-8, "max |int p_t(x,y) dmu(y) - 1|, d=1");
  });

  rec.guard("symmetry", [&] {
    Stream rng = check_stream(opt, 1);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const int d = 1 + i % 3;
      std::vector<double> x(d), y(d);
      for (auto& v : x) v = 2.0 * rng.normal();
      for (auto& v : y) v = 2.0 * rng.normal();
      const double t = std::exp(4.0 * rng.uniform() - 3.0);
      worst = std::max(worst, rel_err(mehler_kernel(t, x, y), mehler_kernel(t, y, x)));
    }
    rec.at_most("symmetry", worst, 1e-8, "max relative |p_t(x,y) - p_t(y,x)|");
  });

  rec.guard("semigroup", [&] {
    double worst = 0.0;
    const double grid_t[] = {0.1, 0.5, 2.0}, grid_x[] = {-1.0, 0.0, 1.5};
    for (double s : grid_t)
      for (double t : grid_t)
        for (double x : grid_x)
          for (double y : grid_x) {
            auto f = [&](double z) {
              return mehler_kernel(s, std::span<const double>(&x, 1), std::span<const double>(&z, 1)) *
                     mehler_kernel(t, std::span<const double>(&z, 1), std::span<const double>(&y, 1));
            };
            const double lhs = gauss_integral_1d(f, {0.0, std::exp(-s) * x, std::exp(-t) * y});
            const double rhs = mehler_kernel(s + t, std::span<const double>(&x, 1), std::span<const double>(&y, 1));
            worst = std::max(worst, rel_err(lhs, rhs));
          }
    rec.at_most("semigroup max relative error", worst, 1e-6, "3x3x3x3 grid of (s,t,x,y), d=1");
  });

  rec.guard("diagonal", [&] {
    Stream rng = check_stream(opt, 2);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const int d = 1 + i % 4;
      std::vector<double> x(d);
      for (auto& v : x) v = 3.0 * rng.normal();
      const double t = std::exp(6.0 * rng.uniform() - 4.0);
      worst = std::max(worst, rel_err(mehler_kernel(t, x, x), mehler_diagonal(t, x)));
    }
    const double zero2[2] = {0.0, 0.0}, zero1 = 0.0;
    worst = std::max(worst, rel_err(mehler_diagonal(std::log(2.0), zero2), 4.0 / 3.0));
    worst = std::max(worst, rel_err(mehler_kernel(std::log(2.0), std::span<const double>(&zero1, 1),
                                                  std::span<const double>(&zero1, 1)),
                                    2.0 / std::sqrt(3.0)));
    rec.at_most("diagonal closed form", worst, 1e-12, "kernel on the diagonal vs closed form");
  });

  rec.guard("p-cost at p=2", [&] {
    double worst = 0.0;
    for (int d : {1, 2, 3})
      for (double t : {0.05, 0.5, 2.0})
        for (double r : {0.0, 0.7, 2.5})
          worst = std::max(worst, rel_err(kernel_p_cost(t, d, r, std::nextafter(2.0, 3.0), kTight), kernel_second_moment(t, d, r * r)));
    rec.at_most("p-cost at p=2", worst, 1e-8, "radial quadrature just above p=2 vs second moment closed form");
  });

  rec.guard("power integral", [&] {
    Stream rng = check_stream(opt, 3);
    double worst = 0.0;
    int flags = 0;
    for (int i = 0; i < 100; ++i) {
      const int d = 1 + i % 3;
      std::vector<double> x(d);
      for (auto& v : x) v = 1.5 * rng.normal();
      const double t = std::exp(3.0 * rng.uniform() - 2.0);
      const double q = 2.0 + 4.0 * rng.uniform();
      if (kernel_power_integral(t, x, q).within_bound) ++flags;
      if (i < 30) {
        const PowerIntegral two = kernel_power_integral(t, x, 2.0);
        worst = std::max(worst, rel_err(two.value, mehler_diagonal(2.0 * t, x)));
      }
    }
    rec.at_most("power integral q=2", worst, 1e-8, "int p_t^2 dmu vs p_{2t}(x,x)");
    rec.at_least("power integral bound", flags, 100, "random (t,x,q) inside the stated bound");
  });

  rec.guard("tilted annulus", [&] {
    double worst = 0.0;
    const double y1[1] = {0.5};
    worst = std::max(worst, tilted_annulus_identity(0.0, 1.0, 0.1, 0.1, 0.1, y1, kTight).relative_gap());
    const double y2[2] = {0.3, -0.8}, y3[3] = {0.2, 0.4, -1.1};
    worst = std::max(worst, tilted_annulus_identity(1.0, std::sqrt(2.0), 0.2, 0.3, 0.05, y2, kTight).relative_gap());
    worst = std::max(worst, tilted_annulus_identity(std::sqrt(2.0), std::sqrt(3.0), 0.05, 0.5, 0.2, y3, kTight).relative_gap());
    rec.at_most("tilted annulus identity", worst, 1e-6, "relative gap lhs vs rhs, d=1,2,3");
    Stream rng = check_stream(opt, 4);
    double worst_ratio = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto ta = TiltedAnnulus::make(2 * rng.uniform(), 2 * rng.uniform(), rng.uniform());
      worst_ratio = std::max(worst_ratio, rel_err(ta.ratio_excess(), ta.ratio_excess_closed_form()));
    }
    rec.at_most("tilted ratio excess", worst_ratio, 1e-10, "alpha^2/beta - 1 vs (1-a)(1-b)/(a+b)");
  });

  rec.guard("trace identity", [&] {
    double worst = 0.0;
    for (int d : {1, 2, 3})
      for (double s : {0.3, 1.0, 3.0}) {
        auto f = [&](double r) { return std::exp(mehler_log_diagonal(s, d, r * r)) * chi_pdf(r, d); };
        const double v = integrate_adaptive(f, 0.0, INFINITY, kTight).value;
        worst = std::max(worst, rel_err(v, bounds::restricted_diagonal_mass(s, INFINITY, d)));
      }
    rec.at_most("trace identity", worst, 1e-8, "int p_s(x,x) dmu vs (1-e^{-s})^{-d}");
  });
}

// -------------------------------------------------------------- spectral

HermiteExpansion random_expansion(Stream& rng, int max_degree, bool mean_zero) {
  const int deg = 1 + static_cast<int>(rng.uniform() * max_degree);
  std::vector<double> c(deg + 1);
  for (int k = 0; k <= deg; ++k) c[k] = rng.normal() / std::sqrt(std::tgamma(k + 1.0));
  if (mean_zero) c[0] = 0.0;
  return HermiteExpansion(c);
}

void spectral_suite(CheckReport& report, const CheckOptions& opt) {
  Recorder rec(report, "spectral");

  rec.guard("eigenrelation", [&] {
    double worst = 0.0;
    for (int k = 0; k <= 6; ++k)
      for (double t : {0.1, 1.0, 3.0}) {
        const HermiteExpansion Pt = semigroup_apply(HermiteExpansion::basis(k), t);
        for (int j = 0; j <= Pt.degree(); ++j)
          worst = std::max(worst, std::abs(Pt.coeff(j) - (j == k ? std::exp(-k * t) : 0.0)));
        for (double x : {-2.0, -0.5, 0.0, 1.0, 2.5})
          worst = std::max(worst, std::abs(semigroup_apply_quadrature(HermiteExpansion::basis(k), t, x, 64) - Pt(x)));
      }
    const HermiteExpansion half = semigroup_apply(HermiteExpansion::basis(1), std::log(2.0));
    worst = std::max(worst, std::abs(half.coeff(1) - 0.5));
    rec.at_most("eigenrelation", worst, 1e-8, "P_t He_k = e^{-kt} He_k, cross-checked by quadrature");
  });

  rec.guard("exponential decay", [&] {
    Stream rng = check_stream(opt, 10);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const HermiteExpansion f = random_expansion(rng, 8, true);
      for (double t : {0.1, 1.0, 3.0})
        worst = std::max(worst, std::sqrt(semigroup_apply(f, t).l2_norm_sq() / f.l2_norm_sq()) / std::exp(-t));
    }
    rec.at_most("exponential decay", worst, 1.0 + 1e-12, "max ||P_t f||_2 / (e^{-t} ||f||_2), 50 mean-zero f");
  });

  rec.guard("hypercontractivity", [&] {
    double worst = 0.0;
    const QuadSettings q{64, 4000, 1e-11, 1e-15};
    for (double eps : {0.1, 0.5})
      for (auto [p, qq] : {std::pair{2.0, 4.0}, {2.0, 10.0}, {3.0, 5.0}}) {
        const HermiteExpansion f({1.0, eps, eps * eps});
        const double t0 = 0.5 * std::log((qq - 1.0) / (p - 1.0));
        for (double t : {t0, t0 + 0.25, t0 + 1.0})
          worst = std::max(worst, lp_norm(semigroup_apply(f, t), qq, q) / lp_norm(f, p, q));
      }
    rec.at_most("hypercontractivity", worst, 1.0 + 1e-9, "max ||P_t f||_q / ||f||_p with e^{2t} >= (q-1)/(p-1)");
  });

  rec.guard("combined decay", [&] {
    double worst = 0.0;
    const QuadSettings q{64, 4000, 1e-11, 1e-15};
    for (double eps : {0.1, 0.5})
      for (double p : {2.0, 3.0, 4.0, 10.0}) {
        const HermiteExpansion f({0.0, eps, eps * eps});  // mean-zero part of the family
        const double C = std::sqrt(p - 1.0);
        for (double t : {0.1, 0.5, 1.0, 2.0, 4.0})
          worst = std::max(worst, lp_norm(semigroup_apply(f, t), p, q) / (C * std::exp(-0.5 * t) * lp_norm(f, p, q)));
      }
    rec.at_most("combined decay", worst, 1.0 + 1e-9, "max ||P_t f||_p / (C e^{-t/2} ||f||_p), e^{t_0} = p-1");
  });

  rec.guard("riesz p=2", [&] {
    Stream rng = check_stream(opt, 11);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const HermiteExpansion f = random_expansion(rng, 10, false);
      const HermiteExpansion half = spectral_apply(f, 0.5);
      worst = std::max(worst, rel_err(gradient_lp_norm_pow(f, 2.0), riesz_energy(f)));
      worst = std::max(worst, rel_err(half.l2_norm_sq(), riesz_energy(f)));
    }
    rec.at_most("riesz p=2 exactness", worst, 1e-10, "int |f'|^2 dmu vs ||(-L)^{1/2} f||_2^2");
  });

  rec.guard("spectral calculus", [&] {
    double worst = 0.0;
    worst = std::max(worst, std::abs(spectral_apply(HermiteExpansion::basis(1), -0.5).coeff(1) - 1.0));
    worst = std::max(worst, std::abs(spectral_apply(HermiteExpansion::basis(4), -1.0).coeff(4) - 0.25));
    Stream rng = check_stream(opt, 12);
    for (int i = 0; i < 20; ++i) {
      const HermiteExpansion f = random_expansion(rng, 8, true);
      const HermiteExpansion a = spectral_apply(spectral_apply(f, -0.5), -0.5), b = spectral_apply(f, -1.0);
      const HermiteExpansion c = spectral_apply(spectral_apply(f, 0.5), 0.5), d = spectral_apply(f, 1.0);
      for (int k = 0; k <= f.degree(); ++k) {
        worst = std::max(worst, std::abs(a.coeff(k) - b.coeff(k)));
        worst = std::max(worst, std::abs(c.coeff(k) - d.coeff(k)));
      }
    }
    rec.at_most("spectral calculus", worst, 1e-12, "(-L)^{-1/2} He_1, (-L)^{-1} He_4, exponent addition");
  });

  rec.guard("pseudo-poincare", [&] {
    // C fitted on first calibration over this grid (1.2077) and frozen
    constexpr double kFrozenC = 1.25;
    double worst = 0.0;
    const QuadSettings q{64, 4000, 1e-10, 1e-15};
    for (int k = 1; k <= 5; ++k)
      for (double p : {2.0, 3.0, 4.0}) {
        const HermiteExpansion f = HermiteExpansion::basis(k);
        const double grad = gradient_lp_norm_pow(f, p, q);
        for (double t : {0.01, 0.05, 0.1, 0.25, 0.5, 1.0}) {
          const HermiteExpansion diff = semigroup_apply(f, t) + (-1.0) * f;
          worst = std::max(worst, lp_norm_pow(diff, p, q) / (std::pow(t, p / 2) * grad));
        }
      }
    rec.at_most("pseudo-poincare", worst, kFrozenC, "max int|P_t f - f|^p / (t^{p/2} int|f'|^p), He_1..He_5");
  });
}

// -------------------------------------------------------------------- ot

void ot_suite(CheckReport& report, const CheckOptions& opt) {
  Recorder rec(report, "ot");
  using namespace gaussmatch::ot;

  rec.guard("hand examples", [&] {
    const PointCloud X(1, {0.0, 2.0}), Y(1, {1.0, 3.0});
    const CostMatrix C = cost_matrix(X, Y, 2.0);
    double worst = std::abs(C(0, 0) - 1) + std::abs(C(0, 1) - 9) + std::abs(C(1, 0) - 1) + std::abs(C(1, 1) - 1);
    worst = std::max(worst, std::abs(opt.assignment(C).cost - 1.0));
    const DiscreteMeasure delta{PointCloud(1, {0.0}), {1.0}};
    const DiscreteMeasure split{PointCloud(1, {-1.0, 1.0}), {0.5, 0.5}};
    worst = std::max(worst, std::abs(solve_general_ot(delta, split, 2.0).cost - 1.0));
    worst = std::max(worst, std::abs(sorted_1d_wp({0.0, 1.0}, {0.5, 1.5}, 1.0) - 0.5));
    rec.at_most("hand examples", worst, 1e-12, "cost matrix, assignment, split mass, sorted pairs");
  });

  rec.guard("oracle equivalence", [&] {
    Stream rng = check_stream(opt, 20);
    double worst_assign = 0.0, worst_general = 0.0, worst_sorted = 0.0, worst_plan = 0.0;
    for (int inst = 0; inst < 200; ++inst) {
      const std::size_t n = 1 + rng.next_u64() % 7;
      const std::size_t d = 1 + rng.next_u64() % 3;
      const double p = 1.0 + static_cast<double>(rng.next_u64() % 3);
      PointCloud X = PointCloud::zeros(n, d), Y = PointCloud::zeros(n, d);
      for (auto& v : X.coords()) v = rng.normal();
      for (auto& v : Y.coords()) v = rng.normal();
      const double brute = brute_force_wp(X, Y, p);
      const CostMatrix C = cost_matrix(X, Y, p);
      const TransportResult a = opt.assignment(C);
      worst_assign = std::max(worst_assign, std::abs(a.cost - brute));
      const auto u = DiscreteMeasure::uniform(X), w = DiscreteMeasure::uniform(Y);
      const TransportResult g = solve_general_ot(u, w, p);
      worst_general = std::max(worst_general, std::abs(g.cost - brute));
      worst_plan = std::max(worst_plan, plan_marginal_violation(a, u.weights, w.weights));
      worst_plan = std::max(worst_plan, plan_marginal_violation(g, u.weights, w.weights));
      worst_plan = std::max(worst_plan, std::abs(plan_cost(a, X, Y, p) - a.cost));
      worst_plan = std::max(worst_plan, std::abs(plan_cost(g, X, Y, p) - g.cost));
      if (d == 1) worst_sorted = std::max(worst_sorted, std::abs(sorted_1d_wp(X, Y, p) - brute));
    }
    rec.at_most("oracle equivalence: assignment", worst_assign, 1e-9, "200 instances, n<=7, d<=3, p in {1,2,3}");
    rec.at_most("oracle equivalence: general", worst_general, 1e-9, "same instances");
    rec.at_most("oracle equivalence: sorted-1d", worst_sorted, 1e-9, "d=1 instances");
    rec.at_most("plan feasibility", worst_plan, 1e-9, "marginals and recomputed cost");
  });

  rec.guard("metric properties", [&] {
    Stream rng = check_stream(opt, 21);
    double asym = 0.0, tri = 0.0;
    for (int i = 0; i < 50; ++i) {
      DiscreteMeasure m[3];
      const double p = 1.0 + static_cast<double>(i % 3);
      for (auto& mu : m) {
        const std::size_t n = 1 + rng.next_u64() % 6;
        PointCloud P = PointCloud::zeros(n, 2);
        for (auto& v : P.coords()) v = rng.normal();
        std::vector<double> wts(n);
        double s = 0.0;
        for (auto& v : wts) s += (v = 0.1 + rng.uniform());
        for (auto& v : wts) v /= s;
        mu = {P, wts};
      }
      auto W = [&](int a, int b) { return std::pow(solve_general_ot(m[a], m[b], p).cost, 1.0 / p); };
      const double w01 = W(0, 1), w10 = W(1, 0), w12 = W(1, 2), w02 = W(0, 2);
      asym = std::max(asym, std::abs(w01 - w10));
      tri = std::max(tri, w02 - (w01 + w12));
    }
    rec.at_most("metric symmetry", asym, 1e-12, "|W(a,b) - W(b,a)|, random weighted triples");
    rec.at_most("triangle inequality", tri, 1e-9, "max W(a,c) - W(a,b) - W(b,c)");
  });

  rec.guard("scaling", [&] {
    Stream rng = check_stream(opt, 22);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double p = 1.0 + static_cast<double>(i % 3), lambda = 2.5;
      PointCloud X = PointCloud::zeros(6, 2), Y = PointCloud::zeros(6, 2);
      for (auto& v : X.coords()) v = rng.normal();
      for (auto& v : Y.coords()) v = rng.normal();
      PointCloud Xs = X, Ys = Y;
      for (auto& v : Xs.coords()) v *= lambda;
      for (auto& v : Ys.coords()) v *= lambda;
      const double base = opt.assignment(cost_matrix(X, Y, p)).cost;
      worst = std::max(worst, rel_err(opt.assignment(cost_matrix(Xs, Ys, p)).cost, std::pow(lambda, p) * base));
      const double gbase = solve_general_ot(DiscreteMeasure::uniform(X), DiscreteMeasure::uniform(Y), p).cost;
      const double gs = solve_general_ot(DiscreteMeasure::uniform(Xs), DiscreteMeasure::uniform(Ys), p).cost;
      worst = std::max(worst, rel_err(gs, std::pow(lambda, p) * gbase));
    }
    rec.at_most("scaling", worst, 1e-9, "cost(lambda X, lambda Y) / (lambda^p cost(X, Y)) - 1");
  });

  rec.guard("sinkhorn", [&] {
    Stream rng = check_stream(opt, 23);
    double worst = 0.0, viol = 0.0, self = 0.0;
    for (std::size_t n : {8, 16, 32}) {
      PointCloud X = PointCloud::zeros(n, 2), Y = PointCloud::zeros(n, 2);
      for (auto& v : X.coords()) v = rng.normal();
      for (auto& v : Y.coords()) v = rng.normal();
      SinkhornSettings s;
      s.epsilon_min = 1e-3;
      s.debiased = true;
      const auto u = DiscreteMeasure::uniform(X), w = DiscreteMeasure::uniform(Y);
      const TransportResult r = sinkhorn(u, w, 2.0, s);
      const double exact = opt.assignment(cost_matrix(X, Y, 2.0)).cost;
      worst = std::max(worst, rel_err(r.cost, exact));
      viol = std::max(viol, r.diagnostics.marginal_violation);
      self = std::max(self, std::abs(sinkhorn(u, u, 2.0, s).cost));
    }
    rec.at_most("sinkhorn debiased vs exact", worst, 0.01, "relative gap at epsilon 1e-3, n in {8,16,32}");
    rec.at_most("sinkhorn marginal violation", viol, 1e-6, "L1 violation at termination");
    rec.at_most("sinkhorn self transport", self, 1e-6, "debiased cost of X to itself");
  });
}

// -------------------------------------------------------------- pipeline

smoothing::SmoothedEmpirical pipeline_instance(std::size_t n, int d, std::uint64_t seed, std::uint64_t tag) {
  using namespace smoothing;
  // p = 1 keeps the general variant admissible at d = 2; the times do not depend on p
  const AnnulusSchedule sch = AnnulusSchedule::build(std::max<double>(n, 16.0), d, 1.0, Variant::general_p);
  Stream sx = Stream::derive(seed, n, tag, StreamPurpose::sample_x);
  Stream sl = Stream::derive(seed, n, tag, StreamPurpose::localize);
  const Localization loc = localize(sample_gaussian(n, d, sx), sch, sl);
  return assign_times(loc.sample, sch);
}

void pipeline_suite(CheckReport& report, const CheckOptions& opt) {
  Recorder rec(report, "pipeline");
  using namespace smoothing;

  rec.guard("schedule invariants", [&] {
    Stream rng = check_stream(opt, 30);
    int violations = 0, built = 0;
    std::string first;
    for (int i = 0; i < 500; ++i) {
      const int d = 2 + static_cast<int>(rng.next_u64() % 5);
      const double n = std::exp(std::log(1e3) + rng.uniform() * (std::log(1e9) - std::log(1e3)));
      const bool pd = rng.uniform() < 0.3;
      const double p = pd ? d : 1.0 + rng.uniform() * (d - 1.0) * 0.999;
      const AnnulusSchedule s = AnnulusSchedule::build(n, d, p, pd ? Variant::p_equals_d : Variant::general_p);
      ++built;
      const auto v = s.invariant_violations();
      violations += static_cast<int>(v.size());
      if (!v.empty() && first.empty()) first = v.front();
    }
    rec.at_most("schedule invariants", violations, 0, std::to_string(built) + " random schedules" +
                                                          (first.empty() ? "" : "; first: " + first));
  });

  rec.guard("schedule ratios and masses", [&] {
    double worst = 0.0;
    for (int d : {2, 3, 5}) {
      const AnnulusSchedule s = AnnulusSchedule::build(1e5, d, 1.0, Variant::general_p);
      for (int k = 2; k < s.m(); ++k) worst = std::max(worst, rel_err(s.time(k) / s.time(k - 1), std::exp(1.0 / d)));
      double sum = 0.0;
      for (int k = 1; k <= s.m(); ++k) sum += annulus_mass(k, s);
      worst = std::max(worst, std::abs(sum - gaussian_ball_mass(s.R(), d)));
    }
    rec.at_most("schedule ratios and masses", worst, 1e-12, "t_k/t_{k-1} = e^{1/d}; sum of masses = mu(B_R)");
  });

  rec.guard("h12 single atom", [&] {
    double worst = 0.0;
    for (double t : {0.01, 0.1, 0.5}) {
      const SmoothedEmpirical sm(PointCloud(2, {0.0, 0.0}), {t});
      worst = std::max(worst, std::abs(h12_norm_sq(sm, {1, 4000, 1e-10, 1e-15}).value + 0.5 * std::log(-std::expm1(-4 * t))));
    }
    rec.at_most("h12 single atom", worst, 1e-8, "vs -(1/2) ln(1 - e^{-4t}), d=2");
  });

  rec.guard("h12 monte carlo", [&] {
    double worst = 0.0;
    std::ostringstream detail;
    for (int d : {2, 3})
      for (std::size_t n : {8, 32}) {
        const SmoothedEmpirical sm = pipeline_instance(n, d, opt.seed, 0);
        Stream mc = check_stream(opt, 31 + d * 100 + n);
        const double exact = h12_norm_sq(sm).value;
        const double mcv = h12_norm_sq_monte_carlo(sm, opt.mc_y_samples, 400, mc).value;
        worst = std::max(worst, rel_err(exact, mcv));
        detail << "d=" << d << " n=" << n << ": " << exact << " vs " << mcv << "; ";
      }
    rec.at_most("h12 vs monte carlo", worst, 0.05, detail.str());
  });

  rec.guard("density normalization", [&] {
    const SmoothedEmpirical sm = pipeline_instance(32, 3, opt.seed, 1);
    Stream rng = check_stream(opt, 32);
    const int N = 40000;
    double s = 0.0, ss = 0.0;
    std::vector<double> y(3);
    for (int i = 0; i < N; ++i) {
      for (auto& v : y) v = rng.normal();
      const double f = density_eval(sm, y);
      s += f;
      ss += f * f;
    }
    const double mean = s / N, se = std::sqrt((ss / N - mean * mean) / (N - 1));
    rec.at_most("density normalization", std::abs(mean - 1.0) / se, 3.0, "|MC mean - 1| in standard errors");
  });

  rec.guard("localization", [&] {
    const int d = 3;
    const double p = 2.0;
    const AnnulusSchedule sch = AnnulusSchedule::build(64, d, p, Variant::general_p);
    const int reps = 4000;
    double s = 0.0, ss = 0.0, max_norm = 0.0;
    for (int r = 0; r < reps; ++r) {
      Stream sx = Stream::derive(opt.seed, 64, r, StreamPurpose::sample_x);
      Stream sl = Stream::derive(opt.seed, 64, r, StreamPurpose::localize);
      const Localization loc = localize(sample_gaussian(64, d, sx), sch, sl);
      s += loc.cost;
      ss += loc.cost * loc.cost;
      for (std::size_t i = 0; i < loc.sample.size(); ++i)
        max_norm = std::max(max_norm, std::sqrt(squared_norm(loc.sample.points[i])));
    }
    const double mean = s / reps, se = std::sqrt((ss / reps - mean * mean) / (reps - 1));
    const double expected = std::pow(2.0, p) * tail_moment(sch.R(), d, p);
    rec.at_most("localization mean", std::abs(mean - expected) / se, 3.0, "vs 2^p tail moment, in standard errors");
    rec.at_most("localized radius", max_norm - sch.R(), 0.0, "max |X^R| - R");
  });

  rec.guard("centering mean", [&] {
    const AnnulusSchedule sch = AnnulusSchedule::build(256, 3, 2.0, Variant::general_p);
    double worst = 0.0;
    for (double s : {0.0, 0.1, 1.0}) worst = std::max(worst, std::abs(centering_mean(sch, s)));
    rec.at_most("centering mean", worst, 1e-8, "|int P_s phi dmu|");
  });

  rec.guard("regularization closed form", [&] {
    const SmoothedEmpirical sm = pipeline_instance(32, 3, opt.seed, 2);
    double direct = 0.0;
    for (std::size_t i = 0; i < sm.size(); ++i) {
      const double t = sm.times()[i], xx = squared_norm(sm.atoms()[i]);
      direct += std::pow(-std::expm1(-t), 2) * xx + 3.0 * -std::expm1(-2 * t);
    }
    direct /= static_cast<double>(sm.size());
    rec.at_most("regularization closed form", rel_err(regularization_cost(sm, 2.0), direct), 1e-12, "p=2");
  });

  rec.guard("certificate assembly", [&] {
    Stream sx = Stream::derive(opt.seed, 64, 0, StreamPurpose::sample_x);
    Stream aux = Stream::derive(opt.seed, 64, 0, StreamPurpose::localize);
    const auto rep = upper_bound_certificate(sample_gaussian(64, 3, sx), 2.0, {}, aux);
    const double assembled = std::pow(std::sqrt(rep.loc) + std::sqrt(rep.reg) + std::sqrt(rep.sob), 2.0);
    const bool nonneg = rep.loc >= 0 && rep.reg >= 0 && rep.sob >= 0 && rep.centering >= 0;
    rec.add("certificate assembly", nonneg && rel_err(rep.total, assembled) < 1e-12, rel_err(rep.total, assembled), 1e-12,
            "total = (sum term^{1/p})^p, all terms >= 0");
  });
}

// ---------------------------------------------------------------- bounds

void bounds_suite(CheckReport& report, const CheckOptions&) {
  Recorder rec(report, "bounds");
  using namespace gaussmatch::bounds;

  rec.guard("restricted diagonal", [&] {
    double worst = 0.0;
    for (int d : {1, 2, 3})
      for (double s : {0.3, 1.0, 2.0})
        for (double R : {0.5, 1.5, 3.0}) {
          auto f = [&](double r) { return std::exp(mehler_log_diagonal(s, d, r * r)) * chi_pdf(r, d); };
          const double v = integrate_adaptive(f, 0.0, R, kTight).value / gaussian_ball_mass(R, d);
          worst = std::max(worst, rel_err(restricted_diagonal_mass(s, R, d), v));
        }
    const double hand = 4.0 * (1.0 - std::exp(-1.0 / 3.0)) / (1.0 - std::exp(-1.0));
    worst = std::max(worst, rel_err(restricted_diagonal_mass(std::log(2.0), std::sqrt(2.0), 2), hand));
    rec.at_most("restricted diagonal vs quadrature", worst, 1e-8, "d=1,2,3");
  });

  rec.guard("full-space trace", [&] {
    double worst = 0.0;
    for (int d : {1, 2, 3})
      for (double s : {0.2, 1.0, 4.0}) {
        double series = 0.0;  // sum_k e^{-ks}, the d=1 Hermite trace
        for (int k = 0; k < 2000; ++k) series += std::exp(-k * s);
        worst = std::max(worst, rel_err(restricted_diagonal_mass(s, INFINITY, d), std::pow(series, d)));
      }
    rec.at_most("full-space trace", worst, 1e-10, "R = inf vs Hermite eigenvalue sum");
  });

  rec.guard("trace monotonicity", [&] {
    int bad = 0;
    for (int d : {1, 2}) {
      LowerBoundConfig cfg = LowerBoundConfig::defaults(1e6, d);
      double prev = INFINITY;
      for (double t : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
        cfg.t = t;
        const double v = trace_integral(cfg).value;
        if (!(v < prev)) ++bad;
        prev = v;
      }
      cfg = LowerBoundConfig::defaults(1e6, d);
      prev = -INFINITY;
      for (double R : {0.3, 0.6, 1.0, 2.0, 4.0}) {
        cfg.R = R;
        const double v = trace_integral(cfg).value;
        if (!(v > prev)) ++bad;
        prev = v;
      }
    }
    rec.at_most("trace monotonicity", bad, 0, "decreasing in t, increasing in R");
  });

  rec.guard("growth d=2", [&] {
    double lo = INFINITY, hi = -INFINITY;
    std::ostringstream detail;
    for (double n : {1e3, 1e6, 1e9, 1e12}) {
      const double r = growth_ratio(LowerBoundConfig::defaults(n, 2));
      lo = std::min(lo, r), hi = std::max(hi, r);
      detail << r << " ";
    }
    rec.at_most("growth d=2 max/min", hi / lo, 1.5, "I/(R^2 log(1/t)) over n=1e3..1e12: " + detail.str());
  });

  rec.guard("growth d=1", [&] {
    double lo = INFINITY, hi = -INFINITY;
    std::ostringstream detail;
    for (double n : {1e3, 1e6, 1e9, 1e12}) {
      const double r = growth_ratio(LowerBoundConfig::defaults(n, 1));
      lo = std::min(lo, r), hi = std::max(hi, r);
      detail << r << " ";
    }
    const double ratio = lo > 0 ? hi / lo : -INFINITY;
    rec.add("growth d=1 max/min", lo > 0 && ratio <= 2.0, ratio, 2.0, "I/log(R^2) over n=1e3..1e12: " + detail.str());
  });

  rec.guard("one-dimensional inequalities", [&] {
    double worst = std::abs(contraction_coefficient(1.0) - 4.0);
    worst = std::max(worst, std::abs(contraction_coefficient(1e-6) - (1.0 + 0.5e-6)));
    for (double c : {0.01, 0.3, 0.7, 1.0}) {
      worst = std::max(worst, std::abs(contraction_profile(1.0, c) - 1.0));
      worst = std::max(worst, std::abs(contraction_profile(0.0, c)));
    }
    const double eps = 1e-3, c = 0.5;
    const HermiteExpansion g = HermiteExpansion::basis(1, eps);
    worst = std::max(worst, std::abs(dual_lower_bound(g, g, c) - (2.0 - std::expm1(c) / c) * eps * eps) / (eps * eps));
    const double c0 = 1e-6;
    const HermiteExpansion shape({0.0, 1.0, 0.3, -0.2});
    double peak = 0.0;
    for (int i = 0; i <= 4000; ++i) peak = std::max(peak, shape(-8.0 + 16.0 * i / 4000));
    const HermiteExpansion f = (0.5 * c0 / peak) * shape;
    const double energy = hermite_inner(f, spectral_apply(f, -1.0));
    worst = std::max(worst, std::abs(dual_lower_bound(f, f, c0) - energy) / energy - c0);
    worst = std::max(worst, std::abs(dual_lower_bound(f, HermiteExpansion({0.0}), c)));
    rec.at_most("one-dimensional inequalities", std::max(worst, 0.0), 1e-6, "coefficient limits, theta boundary, eps He_1 case, c -> 0");
  });
}

}  // namespace

CheckReport run_check(const std::string& suite, const CheckOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  CheckReport report;
  auto run = [&](const std::string& s) {
    if (s == "kernel") kernel_suite(report, options);
    else if (s == "spectral") spectral_suite(report, options);
    else if (s == "ot") ot_suite(report, options);
    else if (s == "pipeline") pipeline_suite(report, options);
    else if (s == "bounds") bounds_suite(report, options);
    else throw InvalidArgument("unknown check suite '" + s + "' (kernel, spectral, ot, pipeline, bounds, all)");
  };
  if (suite == "all") {
    for (const auto& s : check_suites()) run(s);
  } else {
    run(suite);
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace gaussmatch::harness
