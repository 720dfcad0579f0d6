#include <array>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "gaussmatch/common.hpp"
#include "gaussmatch/gaussian_geometry.hpp"
#include "gaussmatch/mehler.hpp"
#include "gaussmatch/quadrature.hpp"
#include "gaussmatch/rng.hpp"
#include "gaussmatch/sampling.hpp"
#include "gaussmatch/smoothing/centering.hpp"
#include "gaussmatch/smoothing/certificate.hpp"
#include "gaussmatch/smoothing/smoothed.hpp"

using namespace gaussmatch;
using namespace gaussmatch::smoothing;

namespace {

SmoothedEmpirical instance(std::size_t n, int d, std::uint64_t seed) {
  Stream sx(seed);
  const auto sample = sample_gaussian(n, d, sx);
  const auto schedule = AnnulusSchedule::build(std::max<double>(n, 16.0), d, 1.0, Variant::general_p);
  Stream ls(seed + 1);
  return assign_times(localize(sample, schedule, ls).sample, schedule);
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double standard_error(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1) / v.size());
}

}  // namespace

TEST(Localize, InsidePointsAreUntouched) {
  const auto schedule = AnnulusSchedule::build(1000.0, 2, 1.0, Variant::general_p);
  EmpiricalSample s;
  s.points = PointCloud(2, {0.1, 0.2, -0.5, 1.0, 0.0, 0.0});
  Stream rng(3);
  const auto loc = localize(s, schedule, rng);
  EXPECT_EQ(loc.cost, 0.0);
  EXPECT_EQ(loc.sample.points, s.points);
  EXPECT_TRUE(loc.sample.localized);
  EXPECT_EQ(loc.sample.resampled, 0);
}

TEST(Localize, ReplacedPointsLieInsideTheBall) {
  const auto schedule = AnnulusSchedule::build(64.0, 3, 2.0, Variant::general_p);
  Stream sx(4);
  auto sample = sample_gaussian(400, 3, sx);
  Stream rng(5);
  const auto loc = localize(sample, schedule, rng);
  EXPECT_GT(loc.sample.resampled, 0);
  EXPECT_GT(loc.cost, 0.0);
  for (std::size_t i = 0; i < loc.sample.size(); ++i)
    EXPECT_LT(std::sqrt(squared_norm(loc.sample.points[i])), schedule.R());
}

TEST(Localize, MeanCostMatchesTailMoment) {
  for (double p : {1.0, 2.0}) {
    const auto schedule = AnnulusSchedule::build(64.0, 3, p, Variant::general_p);
    std::vector<double> costs;
    for (int rep = 0; rep < 4000; ++rep) {
      Stream sx = Stream::derive(11, 64, rep, StreamPurpose::sample_x);
      Stream ls = Stream::derive(11, 64, rep, StreamPurpose::localize);
      costs.push_back(localize(sample_gaussian(64, 3, sx), schedule, ls).cost);
    }
    const double expected = std::pow(2.0, p) * tail_moment(schedule.R(), 3, p);
    EXPECT_NEAR(mean(costs), expected, 3.0 * standard_error(costs)) << p;
  }
}

TEST(AssignTimes, FollowsAnnuli) {
  const auto schedule = AnnulusSchedule::build(1000.0, 2, 1.0, Variant::general_p);
  EmpiricalSample s;
  s.points = PointCloud(2, {0.5, 0.0, 1.0, 0.0, 0.0, 1.5});
  s.localized = true;
  s.radius = schedule.R();
  const auto sm = assign_times(s, schedule);
  EXPECT_EQ(sm.times()[0], schedule.time(1));
  EXPECT_EQ(sm.times()[1], schedule.time(2));
  EXPECT_EQ(sm.times()[2], schedule.time(schedule.annulus_of(1.5)));
  EmpiricalSample outside;
  outside.points = PointCloud(2, {schedule.R() + 0.1, 0.0});
  EXPECT_THROW(assign_times(outside, schedule), InvalidArgument);
}

TEST(Density, SingleAtomAtOrigin) {
  for (double t : {0.01, 0.2, 1.0}) {
    const SmoothedEmpirical sm(PointCloud(3, {0.0, 0.0, 0.0}), {t});
    const std::array<double, 3> y{0.0, 0.0, 0.0};
    const double expected = std::pow(1.0 - std::exp(-2.0 * t), -1.5);
    EXPECT_NEAR(density_eval(sm, y), expected, 1e-13 * expected);
  }
}

TEST(Density, IsMeanOfSingleAtomDensities) {
  const auto sm = instance(12, 2, 21);
  const std::array<double, 2> y{0.3, -0.9};
  double sum = 0.0;
  for (std::size_t i = 0; i < sm.size(); ++i) sum += mehler_kernel(sm.times()[i], sm.atoms()[i], y);
  EXPECT_NEAR(density_eval(sm, y), sum / sm.size(), 1e-12);
  EXPECT_GT(density_eval(sm, y), 0.0);
}

TEST(Density, IntegratesToOne) {
  const auto sm = instance(24, 2, 22);
  Stream rng(23);
  std::vector<double> v;
  for (int i = 0; i < 20000; ++i) {
    const std::array<double, 2> y{rng.normal(), rng.normal()};
    v.push_back(density_eval(sm, y));
  }
  EXPECT_NEAR(mean(v), 1.0, 3.0 * standard_error(v));
}

TEST(Fluctuation, Limits) {
  const auto sm = instance(10, 2, 24);
  const std::array<double, 2> y{0.7, 0.1};
  EXPECT_NEAR(fluctuation_eval(sm, y, 0.0), density_eval(sm, y) - 1.0, 1e-12);
  EXPECT_NEAR(fluctuation_eval(sm, y, 40.0), 0.0, 1e-12);
}

TEST(Fluctuation, MatchesSemigroupQuadratureInOneDimension) {
  // P_s (f - 1)(y) = E[f(e^{-s} y + sqrt(1 - e^{-2s}) Z)] - 1
  const SmoothedEmpirical sm(PointCloud(1, {-0.8, 0.3, 1.6}), {0.05, 0.1, 0.2});
  for (double s : {0.05, 0.5, 2.0})
    for (double yv : {-1.0, 0.4}) {
      const double a = std::exp(-s), b = std::sqrt(1.0 - a * a);
      const double direct = gauss_hermite_integrate(
          [&](double z) {
            const std::array<double, 1> y{a * yv + b * z};
            return density_eval(sm, y);
          },
          200);
      const std::array<double, 1> y{yv};
      EXPECT_NEAR(fluctuation_eval(sm, y, s), direct - 1.0, 1e-6) << s << " " << yv;
    }
}

TEST(Regularization, ClosedFormAtPEqualsTwo) {
  const auto sm = instance(20, 3, 25);
  double expected = 0.0;
  for (std::size_t i = 0; i < sm.size(); ++i) {
    const double t = sm.times()[i];
    expected += std::pow(1.0 - std::exp(-t), 2) * squared_norm(sm.atoms()[i]) + 3.0 * (1.0 - std::exp(-2.0 * t));
  }
  EXPECT_NEAR(regularization_cost(sm, 2.0), expected / sm.size(), 1e-12 * expected / sm.size());
  // smoothing times must be positive, so there is no unsmoothed instance
  EXPECT_THROW(SmoothedEmpirical(PointCloud(2, {1.0, 1.0}), {0.0}), InvalidArgument);
}

TEST(Regularization, DominatedByTimeEnvelope) {
  // <= C (1/n) sum [T_i^2 |X_i|^2 + T_i]
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto sm = instance(50, 3, 100 + seed);
    double env = 0.0;
    for (std::size_t i = 0; i < sm.size(); ++i) {
      const double t = sm.times()[i];
      env += t * t * squared_norm(sm.atoms()[i]) + t;
    }
    worst = std::max(worst, regularization_cost(sm, 2.0) / (env / sm.size()));
  }
  EXPECT_LE(worst, 2.0 * 3.0);
}

TEST(H12, SingleAtomClosedForm) {
  for (double t : {0.01, 0.1, 0.5, 2.0}) {
    const SmoothedEmpirical sm(PointCloud(2, {0.0, 0.0}), {t});
    EXPECT_NEAR(h12_norm_sq(sm).value, -0.5 * std::log(-std::expm1(-4.0 * t)), 1e-8) << t;
  }
}

TEST(H12, DuplicateAtomsChangeNothing) {
  const SmoothedEmpirical one(PointCloud(3, {0.2, -0.4, 1.0}), {0.1});
  const SmoothedEmpirical two(PointCloud(3, {0.2, -0.4, 1.0, 0.2, -0.4, 1.0}), {0.1, 0.1});
  EXPECT_NEAR(h12_norm_sq(two).value, h12_norm_sq(one).value, 1e-10 * h12_norm_sq(one).value);
}

TEST(H12, MatchesMonteCarloOracle) {
  for (int d : {2, 3})
    for (std::size_t n : {8, 32}) {
      const auto sm = instance(n, d, 1000 + 10 * d + n);
      Stream rng(77);
      const double exact = h12_norm_sq(sm).value;
      const double mc = h12_norm_sq_monte_carlo(sm, 100000, 48, rng).value;
      EXPECT_NEAR(mc / exact, 1.0, 0.05) << "d=" << d << " n=" << n;
    }
}

TEST(H1p, AgreesWithH12AtPEqualsTwo) {
  const auto sm = instance(16, 2, 31);
  Stream rng(32);
  const auto est = h1p_norm_estimate(sm, 2.0, 4000, rng);
  const double exact = h12_norm_sq(sm).value;
  EXPECT_NEAR(est.value, exact, 3.0 * est.standard_error);
}

TEST(H1p, SingleAtomDecreasesInTime) {
  double prev = 1e300;
  for (double t : {0.02, 0.05, 0.1, 0.3}) {
    const SmoothedEmpirical sm(PointCloud(3, {0.3, 0.0, -0.2}), {t});
    Stream rng(33);  // common random numbers across t
    const double v = h1p_norm_estimate(sm, 2.5, 2000, rng).value;
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(Centering, MeanIsZero) {
  const auto schedule = AnnulusSchedule::build(256.0, 3, 2.0, Variant::general_p);
  for (double s : {0.0, 0.1, 1.0}) EXPECT_NEAR(centering_mean(schedule, s), 0.0, 1e-8);
}

TEST(Centering, AnnulusIndicatorLimits) {
  EXPECT_NEAR(semigroup_annulus_indicator(1e-12, 0.0, 1.0, 0.5, 2), 1.0, 1e-6);
  EXPECT_NEAR(semigroup_annulus_indicator(1e-12, 0.0, 1.0, 1.5, 2), 0.0, 1e-6);
  EXPECT_NEAR(semigroup_annulus_indicator(50.0, 0.0, 1.0, 1.5, 2), gaussian_ball_mass(1.0, 2), 1e-12);
}

TEST(Centering, SingleAnnulusShrinksAsTheBallFillsSpace) {
  // as t -> 0 the field tends to 1_B / mu(B) - 1, so the bias is driven by mu(B^c)
  double prev = 1e300;
  for (double R : {1.5, 2.0, 3.0, 4.0, 5.0}) {
    const auto s = AnnulusSchedule::custom(2, 2.0, {0.0, R}, {0.01});
    const double v = centering_norm(s, 2.0).value;
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(Centering, ScalesLikeNToMinusTwoOverD) {
  // value <= C n^{-2/d} with C fitted across the grid
  double lo = 1e300, hi = 0.0;
  for (double n : {64.0, 256.0, 1024.0}) {
    const auto s = AnnulusSchedule::build(n, 3, 2.0, Variant::general_p);
    const double r = centering_norm(s, 2.0).value / std::pow(n, -2.0 / 3.0);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  EXPECT_LT(hi / lo, 3.0);
}

TEST(Certificate, RejectsSmallSamples) {
  Stream sx(1), aux(2);
  const auto sample = sample_gaussian(8, 3, sx);
  EXPECT_THROW(upper_bound_certificate(sample, 2.0, {}, aux), InvalidArgument);
}

TEST(Certificate, AssemblyAndReportFields) {
  Stream sx(3), aux(4);
  const auto sample = sample_gaussian(64, 3, sx);
  const auto rep = upper_bound_certificate(sample, 2.0, {}, aux);
  EXPECT_GE(rep.loc, 0.0);
  EXPECT_GT(rep.reg, 0.0);
  EXPECT_GT(rep.sob, 0.0);
  EXPECT_EQ(rep.sobolev_prefactor, 4.0);
  EXPECT_EQ(rep.split_constant, 2.0);
  EXPECT_NEAR(rep.sob, 4.0 * 2.0 * (rep.centered + rep.centering), 1e-12 * rep.sob);
  const double root = std::sqrt(rep.loc) + std::sqrt(rep.reg) + std::sqrt(rep.sob);
  EXPECT_NEAR(rep.total, root * root, 1e-12 * rep.total);
  EXPECT_FALSE(rep.riesz_caveat);
  EXPECT_EQ(rep.seed, sample.stream_key);
  const auto j = to_json(rep);
  for (const char* key : {"n", "d", "p", "variant", "c", "R", "m", "loc", "reg", "sob", "centering", "total", "seed"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Certificate, ReproducibleBitForBit) {
  Stream sx1(5), sx2(5), a1(6), a2(6);
  const auto r1 = upper_bound_certificate(sample_gaussian(48, 3, sx1), 2.0, {}, a1);
  const auto r2 = upper_bound_certificate(sample_gaussian(48, 3, sx2), 2.0, {}, a2);
  EXPECT_EQ(r1.total, r2.total);
}

TEST(Certificate, GeneralPCarriesRieszCaveat) {
  Stream sx(7), aux(8);
  CertificateOptions opt;
  opt.y_samples = 1000;
  const auto rep = upper_bound_certificate(sample_gaussian(64, 3, sx), 1.5, opt, aux);
  EXPECT_TRUE(rep.riesz_caveat);
  EXPECT_GT(rep.centered_se, 0.0);
  EXPECT_GT(rep.total, 0.0);
}

TEST(Certificate, DecreasesAcrossMatchedSeeds) {
  double prev = 1e300;
  for (std::size_t n : {64, 256, 1024}) {
    double sum = 0.0;
    for (int rep = 0; rep < 4; ++rep) {
      Stream sx = Stream::derive(9, n, rep, StreamPurpose::sample_x);
      Stream aux = Stream::derive(9, n, rep, StreamPurpose::localize);
      sum += upper_bound_certificate(sample_gaussian(n, 3, sx), 2.0, {}, aux).total;
    }
    EXPECT_LT(sum, prev) << n;
    prev = sum;
  }
}
