#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gaussmatch/common.hpp"
#include "gaussmatch/gaussian_geometry.hpp"
#include "gaussmatch/mehler.hpp"
#include "gaussmatch/quadrature.hpp"
#include "gaussmatch/special.hpp"
#include "gaussmatch/tilted_annulus.hpp"

using namespace gaussmatch;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// int f dmu over R in d = 1 by adaptive quadrature against the normal density
double gaussian_integral(const std::function<double(double)>& f) {
  const auto r = integrate_adaptive([&](double z) { return (f(z) + f(-z)) * normal_pdf(z); }, 0.0, kInf, 1e-12, 1e-15,
                                    4000, {1.0, 3.0});
  return r.value;
}

double k1(double t, double x, double y) {
  const std::array<double, 1> xs{x}, ys{y};
  return mehler_kernel(t, xs, ys);
}

}  // namespace

TEST(Mehler, Examples) {
  const std::array<double, 1> zero{0.0};
  EXPECT_NEAR(mehler_kernel(std::log(2.0), zero, zero), 2.0 / std::sqrt(3.0), 1e-15);
  const std::array<double, 3> x{0.3, -1.2, 2.0}, y{-0.7, 0.4, 1.1};
  EXPECT_DOUBLE_EQ(mehler_kernel(kInf, x, y), 1.0);
  EXPECT_NEAR(mehler_kernel(60.0, x, y), 1.0, 1e-12);
}

TEST(Mehler, SymmetricAndPositive) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ut(1e-4, 5.0);
  for (int rep = 0; rep < 200; ++rep) {
    std::array<double, 3> x{}, y{};
    for (auto& v : x) v = 2.0 * nd(gen);
    for (auto& v : y) v = 2.0 * nd(gen);
    const double t = ut(gen);
    const double a = mehler_kernel(t, x, y), b = mehler_kernel(t, y, x);
    EXPECT_GE(a, 0.0);  // may underflow for distant points at small t
    EXPECT_EQ(a, b);
    EXPECT_TRUE(std::isfinite(mehler_log_kernel(t, 3, squared_norm(x), squared_norm(y), squared_distance(x, y))));
  }
}

TEST(Mehler, MatchesTextbookFormula) {
  // (1-a^2)^{-1/2} exp(-(a^2 (x^2+y^2) - 2axy) / (2(1-a^2))) in d = 1
  for (double t : {0.05, 0.5, 2.0})
    for (double x : {-1.5, 0.0, 0.8})
      for (double y : {-0.4, 1.9}) {
        const double a = std::exp(-t), q = 1.0 - a * a;
        const double expected = std::exp(-(a * a * (x * x + y * y) - 2.0 * a * x * y) / (2.0 * q)) / std::sqrt(q);
        EXPECT_NEAR(k1(t, x, y) / expected, 1.0, 1e-13);
      }
}

TEST(Mehler, StableAtSmallTimeAndLargeArguments) {
  // the naive product form overflows here; the kernel itself is about e^{200} / (2e-8)
  const std::array<double, 2> x{20.0, 0.0}, y{20.0, 1e-6};
  const double v = mehler_kernel(1e-8, x, y);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(std::log(v), mehler_log_kernel(1e-8, 2, 400.0, 400.0 + 1e-12, 1e-12), 1e-9 * std::log(v));
  EXPECT_NEAR(mehler_log_kernel(1e-8, 2, 1600.0, 1600.0 + 1e-12, 1e-12), mehler_log_diagonal(1e-8, 2, 1600.0), 1e-3);
  EXPECT_THROW(mehler_kernel(1.0, std::array<double, 1>{0.0}, std::array<double, 2>{0.0, 0.0}), InvalidArgument);
  EXPECT_THROW(mehler_kernel(1.0, std::array<double, 1>{std::nan("")}, std::array<double, 1>{0.0}), InvalidArgument);
}

TEST(Mehler, Normalization) {
  for (double t : {0.01, 0.1, 1.0, 4.0})
    for (double x : {-2.0, 0.0, 0.5, 3.0}) EXPECT_NEAR(gaussian_integral([&](double y) { return k1(t, x, y); }), 1.0, 1e-8);
}

TEST(Mehler, SemigroupGrid) {
  const std::array<double, 3> times{0.1, 0.5, 1.5}, points{-1.0, 0.2, 1.7};
  double worst = 0.0;
  for (double s : times)
    for (double t : times)
      for (double x : points)
        for (double y : points) {
          const double lhs = gaussian_integral([&](double z) { return k1(s, x, z) * k1(t, z, y); });
          worst = std::max(worst, std::abs(lhs / k1(s + t, x, y) - 1.0));
        }
  EXPECT_LT(worst, 1e-6);
}

TEST(MehlerDiagonal, Examples) {
  const std::array<double, 2> zero{0.0, 0.0};
  EXPECT_NEAR(mehler_diagonal(std::log(2.0), zero), 4.0 / 3.0, 1e-15);
  for (double t : {0.01, 0.3, 2.0}) EXPECT_NEAR(mehler_diagonal(t, zero), std::pow(1.0 - std::exp(-2.0 * t), -1.0), 1e-12);
}

TEST(MehlerDiagonal, AgreesWithKernel) {
  for (double t : {1e-3, 0.2, 1.0, 7.0}) {
    const std::array<double, 3> x{0.4, -2.2, 1.3};
    EXPECT_NEAR(mehler_diagonal(t, x) / mehler_kernel(t, x, x), 1.0, 1e-12);
  }
}

TEST(MehlerDiagonal, UpperBound) {
  // p_t(x,x) <= (1-a^2)^{-d/2} e^{|x|^2/2}
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-4.0, 4.0), ut(1e-3, 4.0);
  for (int rep = 0; rep < 300; ++rep) {
    const std::array<double, 2> x{u(gen), u(gen)};
    const double t = ut(gen), a = std::exp(-t);
    const double bound = std::pow(1.0 - a * a, -1.0) * std::exp(squared_norm(x) / 2.0);
    EXPECT_LE(mehler_diagonal(t, x), bound * (1.0 + 1e-14));
  }
}

TEST(SecondMoment, Examples) {
  const std::array<double, 3> zero{0.0, 0.0, 0.0}, x{1.0, 2.0, -0.5};
  EXPECT_EQ(kernel_second_moment(0.0, x), 0.0);
  EXPECT_NEAR(kernel_second_moment(1.0, zero), 3.0 * (1.0 - std::exp(-2.0)), 1e-15);
  EXPECT_NEAR(kernel_second_moment(80.0, x), squared_norm(x) + 3.0, 1e-12);
}

TEST(SecondMoment, IncreasingInTime) {
  const std::array<double, 2> x{1.5, -0.5};
  double prev = 0.0;
  for (double t = 0.01; t < 6.0; t += 0.01) {
    const double v = kernel_second_moment(t, x);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(PCost, ConsistentWithSecondMoment) {
  for (int d : {1, 2, 3, 5})
    for (double t : {1e-3, 0.1, 1.0, 3.0})
      for (double r : {0.0, 0.7, 2.5})
        EXPECT_NEAR(kernel_p_cost(t, d, r, 2.0) / kernel_second_moment(t, d, r * r), 1.0, 1e-8)
            << "d=" << d << " t=" << t << " r=" << r;
}

TEST(PCost, Examples) {
  EXPECT_EQ(kernel_p_cost(0.0, 2, 1.0, 3.0), 0.0);
  EXPECT_NEAR(kernel_p_cost(40.0, 1, 0.0, 1.0), std::sqrt(2.0 / std::numbers::pi), 1e-10);
  // d = 1, x = 0: E|sqrt(1-a^2) Z|^p = (1-a^2)^{p/2} 2^{p/2} Gamma((p+1)/2)/sqrt(pi)
  for (double p : {1.0, 1.5, 3.0, 4.5}) {
    const double t = 0.4, q = 1.0 - std::exp(-2.0 * t);
    const double expected = std::pow(q, p / 2.0) * std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) /
                            std::sqrt(std::numbers::pi);
    EXPECT_NEAR(kernel_p_cost(t, 1, 0.0, p) / expected, 1.0, 1e-8) << p;
  }
}

TEST(PCost, AgreesWithDirectQuadratureInOneDimension) {
  for (double p : {1.0, 2.5, 3.0}) {
    const double t = 0.3, x = 1.2;
    const double direct = gaussian_integral([&](double y) { return std::pow(std::abs(x - y), p) * k1(t, x, y); });
    EXPECT_NEAR(kernel_p_cost(t, 1, x, p) / direct, 1.0, 1e-7);
  }
}

TEST(PowerIntegral, SemigroupAtQEqualsTwo) {
  for (double t : {0.05, 0.5, 2.0}) {
    const std::array<double, 2> x{0.4, -1.1};
    const auto r = kernel_power_integral(t, x, 2.0);
    EXPECT_NEAR(r.value / mehler_diagonal(2.0 * t, x), 1.0, 1e-8);
  }
  const std::array<double, 1> zero{0.0};
  EXPECT_NEAR(kernel_power_integral(std::log(2.0), zero, 2.0).value, 1.0 / std::sqrt(1.0 - 1.0 / 16.0), 1e-10);
}

TEST(PowerIntegral, BoundHoldsOnRandomPoints) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> ut(0.02, 3.0), uq(2.0, 6.0), ux(-2.5, 2.5);
  for (int rep = 0; rep < 100; ++rep) {
    const std::array<double, 2> x{ux(gen), ux(gen)};
    const auto r = kernel_power_integral(ut(gen), x, uq(gen));
    EXPECT_TRUE(r.within_bound) << r.value << " > " << r.bound;
    EXPECT_GT(r.value, 0.0);
  }
  EXPECT_THROW(kernel_power_integral(1.0, std::array<double, 1>{0.0}, 1.5), InvalidArgument);
}

TEST(TiltedAnnulus, RatioExcessClosedForm) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(1e-3, 3.0);
  for (int rep = 0; rep < 500; ++rep) {
    const auto ta = TiltedAnnulus::make(u(gen), u(gen), u(gen));
    EXPECT_NEAR(ta.ratio_excess(), ta.ratio_excess_closed_form(), 1e-10 * std::max(1.0, ta.ratio_excess_closed_form()));
    const double a = ta.a, b = ta.b;
    EXPECT_NEAR(ta.alpha * ta.alpha, 1.0 + a * a / (1.0 - a * a) + b * b / (1.0 - b * b), 1e-10 * ta.alpha * ta.alpha);
    EXPECT_NEAR(ta.beta, a / (1.0 - a * a) + b / (1.0 - b * b), 1e-10 * ta.beta);
  }
}

TEST(TiltedAnnulus, IdentityExample) {
  const std::array<double, 1> y{0.5};
  const auto r = tilted_annulus_identity(0.0, 1.0, 0.1, 0.1, 0.1, y);
  EXPECT_LT(r.relative_gap(), 1e-6);
}

TEST(TiltedAnnulus, IdentityAcrossDimensions) {
  const std::array<double, 2> y2{0.3, -0.8};
  const std::array<double, 3> y3{0.0, 0.0, 0.0};
  EXPECT_LT(tilted_annulus_identity(1.0, std::sqrt(2.0), 0.05, 0.2, 0.7, y2).relative_gap(), 1e-6);
  EXPECT_LT(tilted_annulus_identity(std::sqrt(2.0), std::sqrt(3.0), 0.3, 0.1, 0.1, y3).relative_gap(), 1e-6);
}

TEST(TiltedAnnulus, CenteredShiftIsScaledShell) {
  // y = 0: mu(alpha D) is a plain shell mass
  for (int d : {1, 2, 3})
    EXPECT_NEAR(shifted_annulus_mass(0.8, 1.9, 0.0, d), gaussian_shell_mass(0.8, 1.9, d), 1e-10);
}
