// Randomized sweeps over invariants that must hold for every input.
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "gaussmatch/gaussian_geometry.hpp"
#include "gaussmatch/hermite.hpp"
#include "gaussmatch/mehler.hpp"
#include "gaussmatch/ot/solvers.hpp"
#include "gaussmatch/rng.hpp"
#include "gaussmatch/sampling.hpp"
#include "gaussmatch/smoothing/schedule.hpp"

using namespace gaussmatch;

namespace {

PointCloud random_cloud(std::size_t n, std::size_t d, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  std::vector<double> c(n * d);
  for (double& v : c) v = nd(gen);
  return PointCloud(d, std::move(c));
}

HermiteExpansion random_mean_zero(int degree, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(degree + 1, 0.0);
  for (int k = 1; k <= degree; ++k) c[k] = u(gen) / std::tgamma(k + 1.0);
  return HermiteExpansion(c);
}

}  // namespace

TEST(ScheduleProperty, RandomGeneralSchedulesAreConsistent) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> logn(std::log(16.0), std::log(1e8)), frac(0.0, 1.0);
  std::uniform_int_distribution<int> dim(2, 6);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = dim(gen);
    const double n = std::exp(logn(gen));
    const double p = 1.0 + frac(gen) * (d - 1.0) * 0.999;
    const auto s = smoothing::AnnulusSchedule::build(n, d, p, smoothing::Variant::general_p);
    ASSERT_TRUE(s.invariant_violations().empty()) << "n=" << n << " d=" << d << " p=" << p;
    EXPECT_LT(s.time(s.m()), 1.0);
    double mass = 0.0;
    for (int k = 1; k <= s.m(); ++k) {
      EXPECT_GT(s.radius(k), s.radius(k - 1));
      if (k > 1) EXPECT_GT(s.time(k), s.time(k - 1));
      mass += s.mass(k);
      if (k < s.m()) EXPECT_EQ(s.annulus_of(s.radius(k)), k + 1);
    }
    EXPECT_NEAR(mass, s.ball_mass(), 1e-12);
    EXPECT_NEAR(s.ball_mass(), gaussian_ball_mass(s.R(), d), 1e-12);
  }
}

TEST(ScheduleProperty, PEqualsDHasNoViolations) {
  for (int d : {2, 3})
    for (double n = 100.0; n <= 1e6 * 1.0001; n *= std::sqrt(10.0)) {
      const auto s = smoothing::AnnulusSchedule::build(n, d, d, smoothing::Variant::p_equals_d);
      EXPECT_TRUE(s.invariant_violations().empty()) << "d=" << d << " n=" << n;
    }
}

TEST(KernelProperty, SymmetricPositiveAndConsistentWithLogForm) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> logt(std::log(1e-4), std::log(10.0));
  std::uniform_int_distribution<int> dim(1, 4);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = dim(gen);
    const double t = std::exp(logt(gen));
    const auto P = random_cloud(2, d, gen);
    const auto x = P[0], y = P[1];
    const double kxy = mehler_kernel(t, x, y), kyx = mehler_kernel(t, y, x);
    EXPECT_GE(kxy, 0.0);
    EXPECT_NEAR(kxy, kyx, 1e-12 * std::max(1.0, kxy));
    double xx = 0.0, yy = 0.0, dd = 0.0;
    for (int i = 0; i < d; ++i) {
      xx += x[i] * x[i];
      yy += y[i] * y[i];
      dd += (x[i] - y[i]) * (x[i] - y[i]);
    }
    const double lg = mehler_log_kernel(t, d, xx, yy, dd);
    if (std::isfinite(lg) && lg > -700.0) EXPECT_NEAR(std::log(kxy), lg, 1e-10 * std::max(1.0, std::abs(lg)));
    EXPECT_GE(mehler_log_diagonal(t, d, xx), mehler_log_kernel(t, d, xx, xx, 0.0) - 1e-12);
  }
}

TEST(HermiteProperty, SemigroupComposesAndContracts) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> ut(0.0, 2.0);
  std::uniform_int_distribution<int> deg(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    const auto f = random_mean_zero(deg(gen), gen);
    const double s = ut(gen), t = ut(gen);
    const auto a = semigroup_apply(semigroup_apply(f, s), t);
    const auto b = semigroup_apply(f, s + t);
    for (int k = 0; k <= f.degree(); ++k) EXPECT_NEAR(a.coeff(k), b.coeff(k), 1e-14 * std::abs(f.coeff(k)) + 1e-300);
    EXPECT_LE(semigroup_apply(f, t).l2_norm_sq(), std::exp(-2.0 * t) * f.l2_norm_sq() * (1.0 + 1e-12));
    // spectral exponents add
    const auto c = spectral_apply(spectral_apply(f, -0.5), -0.5);
    const auto e = spectral_apply(f, -1.0);
    for (int k = 1; k <= f.degree(); ++k) EXPECT_NEAR(c.coeff(k), e.coeff(k), 1e-13 * std::abs(e.coeff(k)));
  }
}

TEST(TransportProperty, AssignmentIsOptimalBijection) {
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> size(5, 40), dim(1, 3), pick(0, 2);
  const double ps[] = {1.0, 2.0, 3.0};
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = size(gen), d = dim(gen);
    const double p = ps[pick(gen)];
    const auto X = random_cloud(n, d, gen), Y = random_cloud(n, d, gen);
    const auto C = ot::cost_matrix(X, Y, p);
    const auto r = ot::solve_assignment(C);
    std::set<std::size_t> cols(r.permutation.begin(), r.permutation.end());
    ASSERT_EQ(cols.size(), n);
    EXPECT_LT(*cols.rbegin(), n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += C(i, r.permutation[i]);
    EXPECT_NEAR(r.cost, total / n, 1e-12 * std::max(1.0, r.cost));

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = 0; k < 20; ++k) {
      std::shuffle(perm.begin(), perm.end(), gen);
      double other = 0.0;
      for (std::size_t i = 0; i < n; ++i) other += C(i, perm[i]);
      EXPECT_LE(r.cost, other / n + 1e-12);
    }

    const auto general = ot::solve_general_ot(ot::DiscreteMeasure::uniform(X), ot::DiscreteMeasure::uniform(Y), p);
    EXPECT_NEAR(general.cost, r.cost, 1e-9 * std::max(1.0, r.cost));
    if (d == 1) EXPECT_NEAR(ot::sorted_1d_wp(X, Y, p), r.cost, 1e-9 * std::max(1.0, r.cost));
  }
}

TEST(TransportProperty, SymmetricAndZeroOnItself) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto X = random_cloud(25, 2, gen), Y = random_cloud(25, 2, gen);
    const double xy = ot::solve_assignment(ot::cost_matrix(X, Y, 2.0)).cost;
    const double yx = ot::solve_assignment(ot::cost_matrix(Y, X, 2.0)).cost;
    EXPECT_NEAR(xy, yx, 1e-12 * xy);
    EXPECT_EQ(ot::solve_assignment(ot::cost_matrix(X, X, 2.0)).cost, 0.0);
  }
}

TEST(StreamProperty, DerivedStreamsAreReproducibleAndDistinct) {
  std::set<std::uint64_t> keys;
  for (std::uint64_t n : {8u, 16u, 1024u})
    for (std::uint64_t rep = 0; rep < 50; ++rep)
      for (auto purpose : {StreamPurpose::sample_x, StreamPurpose::sample_y, StreamPurpose::reference}) {
        Stream a = Stream::derive(7, n, rep, purpose), b = Stream::derive(7, n, rep, purpose);
        for (int i = 0; i < 5; ++i) {
          const double u = a.uniform();
          EXPECT_EQ(u, b.uniform());
          EXPECT_GT(u, 0.0);
          EXPECT_LT(u, 1.0);
        }
        keys.insert(a.key());
      }
  EXPECT_EQ(keys.size(), 3u * 50u * 3u);
}

TEST(SamplingProperty, GaussianMomentsAreRoughlyStandard) {
  Stream s = Stream::derive(11, 200000, 0, StreamPurpose::check);
  const auto X = sample_gaussian(200000, 2, s);
  double mean = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    mean += X.points[i][0];
    sq += X.points[i][0] * X.points[i][0] + X.points[i][1] * X.points[i][1];
  }
  mean /= X.size();
  sq /= X.size();
  EXPECT_NEAR(mean, 0.0, 5.0 / std::sqrt(200000.0));
  EXPECT_NEAR(sq, 2.0, 5.0 * 2.0 / std::sqrt(200000.0));
}
