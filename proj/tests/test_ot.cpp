#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "gaussmatch/common.hpp"
#include "gaussmatch/ot/measure.hpp"
#include "gaussmatch/ot/proxy.hpp"
#include "gaussmatch/ot/sinkhorn.hpp"
#include "gaussmatch/ot/solvers.hpp"
#include "gaussmatch/rng.hpp"
#include "gaussmatch/sampling.hpp"

using namespace gaussmatch;
using namespace gaussmatch::ot;

namespace {

PointCloud random_cloud(std::mt19937_64& gen, std::size_t n, std::size_t d) {
  std::normal_distribution<double> nd;
  std::vector<double> c(n * d);
  for (double& v : c) v = nd(gen);
  return PointCloud(d, std::move(c));
}

std::vector<double> random_weights(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> w(n);
  for (double& v : w) v = u(gen);
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= s;
  return w;
}

}  // namespace

TEST(CostMatrix, Examples) {
  const PointCloud single(2, {0.5, -1.0});
  EXPECT_EQ(cost_matrix(single, single, 2.0)(0, 0), 0.0);
  const PointCloud X(1, {0.0, 2.0}), Y(1, {1.0, 3.0});
  const auto C = cost_matrix(X, Y, 2.0);
  EXPECT_EQ(C(0, 0), 1.0);
  EXPECT_EQ(C(0, 1), 9.0);
  EXPECT_EQ(C(1, 0), 1.0);
  EXPECT_EQ(C(1, 1), 1.0);
}

TEST(CostMatrix, ExponentRelationAndSymmetry) {
  std::mt19937_64 gen(1);
  const auto X = random_cloud(gen, 6, 3);
  const auto C1 = cost_matrix(X, X, 1.0), C2 = cost_matrix(X, X, 2.0);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      EXPECT_NEAR(C1(i, j), std::sqrt(C2(i, j)), 1e-14);
      EXPECT_EQ(C2(i, j), C2(j, i));
    }
  EXPECT_THROW(cost_matrix(X, random_cloud(gen, 3, 2), 2.0), DimensionMismatch);
}

TEST(Assignment, Examples) {
  const PointCloud X(1, {0.0, 2.0}), Y(1, {1.0, 3.0});
  const auto r = solve_assignment(cost_matrix(X, Y, 2.0));
  EXPECT_DOUBLE_EQ(r.cost, 1.0);
  EXPECT_EQ(r.permutation, (std::vector<std::size_t>{0, 1}));

  std::mt19937_64 gen(2);
  const auto Z = random_cloud(gen, 9, 2);
  const auto self = solve_assignment(cost_matrix(Z, Z, 2.0));
  EXPECT_EQ(self.cost, 0.0);
  EXPECT_THROW(solve_assignment(CostMatrix(2, 3)), InvalidArgument);
}

TEST(BruteForce, ExamplesAndRelabeling) {
  const PointCloud a(2, {0.3, 0.4}), b(2, {0.0, 0.0});
  EXPECT_NEAR(brute_force_wp(a, b, 3.0), std::pow(0.5, 3.0), 1e-15);
  const PointCloud X(1, {0.0, 2.0}), Y(1, {1.0, 3.0}), Yswap(1, {3.0, 1.0});
  EXPECT_DOUBLE_EQ(brute_force_wp(X, Y, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(brute_force_wp(X, Yswap, 2.0), 1.0);
  std::mt19937_64 gen(3);
  EXPECT_THROW(brute_force_wp(random_cloud(gen, 9, 1), random_cloud(gen, 9, 1), 2.0), InvalidArgument);
}

TEST(GeneralOT, Examples) {
  const DiscreteMeasure delta{PointCloud(1, {0.0}), {1.0}};
  const DiscreteMeasure split{PointCloud(1, {-1.0, 1.0}), {0.5, 0.5}};
  EXPECT_NEAR(solve_general_ot(delta, split, 2.0).cost, 1.0, 1e-12);
  std::mt19937_64 gen(4);
  const auto X = DiscreteMeasure::uniform(random_cloud(gen, 12, 3));
  EXPECT_NEAR(solve_general_ot(X, X, 2.0).cost, 0.0, 1e-12);
}

TEST(OracleEquivalence, TwoHundredRandomInstances) {
  std::mt19937_64 gen(20261019);
  std::uniform_int_distribution<int> un(1, 7), ud(1, 3), up(1, 3);
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = un(gen), d = ud(gen);
    const double p = up(gen);
    const auto X = random_cloud(gen, n, d), Y = random_cloud(gen, n, d);
    const double brute = brute_force_wp(X, Y, p);
    const auto C = cost_matrix(X, Y, p);
    EXPECT_NEAR(solve_assignment(C).cost, brute, 1e-9) << inst;
    const auto g = solve_general_ot(DiscreteMeasure::uniform(X), DiscreteMeasure::uniform(Y), p);
    EXPECT_NEAR(g.cost, brute, 1e-9) << inst;
    if (d == 1) EXPECT_NEAR(sorted_1d_wp(X, Y, p), brute, 1e-9) << inst;
  }
}

TEST(GeneralOT, AgreesWithAssignmentOnLargerUniformInstances) {
  std::mt19937_64 gen(5);
  for (std::size_t n : {20, 50, 120}) {
    const auto X = random_cloud(gen, n, 2), Y = random_cloud(gen, n, 2);
    const double a = solve_assignment(cost_matrix(X, Y, 2.0)).cost;
    const double g = solve_general_ot(DiscreteMeasure::uniform(X), DiscreteMeasure::uniform(Y), 2.0).cost;
    EXPECT_NEAR(a, g, 1e-9 * std::max(1.0, a));
  }
}

TEST(Plans, FeasibleAndConsistent) {
  std::mt19937_64 gen(6);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 3 + rep % 9, m = 2 + (rep * 7) % 13;
    const auto X = random_cloud(gen, n, 2), Y = random_cloud(gen, m, 2);
    const auto a = random_weights(gen, n), b = random_weights(gen, m);
    const auto r = solve_general_ot(DiscreteMeasure{X, a}, DiscreteMeasure{Y, b}, 2.0);
    EXPECT_LE(plan_marginal_violation(r, a, b), 1e-9);
    EXPECT_NEAR(plan_cost(r, X, Y, 2.0), r.cost, 1e-9);
    for (const auto& e : r.coupling) EXPECT_GE(e.mass, 0.0);
  }
  const auto X = random_cloud(gen, 10, 3), Y = random_cloud(gen, 10, 3);
  const auto r = solve_assignment(cost_matrix(X, Y, 3.0));
  const std::vector<double> u(10, 0.1);
  EXPECT_LE(plan_marginal_violation(r, u, u), 1e-12);
  EXPECT_NEAR(plan_cost(r, X, Y, 3.0), r.cost, 1e-12);
}

TEST(Metric, SymmetryAndTriangle) {
  std::mt19937_64 gen(7);
  for (int rep = 0; rep < 40; ++rep) {
    const double p = 1.0 + rep % 3;
    DiscreteMeasure A{random_cloud(gen, 5, 2), random_weights(gen, 5)};
    DiscreteMeasure B{random_cloud(gen, 6, 2), random_weights(gen, 6)};
    DiscreteMeasure C{random_cloud(gen, 4, 2), random_weights(gen, 4)};
    auto w = [p](const DiscreteMeasure& x, const DiscreteMeasure& y) {
      return std::pow(solve_general_ot(x, y, p).cost, 1.0 / p);
    };
    EXPECT_NEAR(w(A, B), w(B, A), 1e-12);
    EXPECT_LE(w(A, C), w(A, B) + w(B, C) + 1e-9);
  }
}

TEST(Scaling, CostIsHomogeneous) {
  std::mt19937_64 gen(8);
  for (double p : {1.0, 2.0, 3.0})
    for (double lambda : {0.5, 3.0}) {
      auto X = random_cloud(gen, 7, 2), Y = random_cloud(gen, 7, 2);
      const double base = solve_assignment(cost_matrix(X, Y, p)).cost;
      for (double& v : X.coords()) v *= lambda;
      for (double& v : Y.coords()) v *= lambda;
      EXPECT_NEAR(solve_assignment(cost_matrix(X, Y, p)).cost, std::pow(lambda, p) * base, 1e-9 * base);
    }
}

TEST(Sorted1d, Examples) {
  EXPECT_DOUBLE_EQ(sorted_1d_wp({0.0, 1.0}, {0.5, 1.5}, 1.0), 0.5);
  EXPECT_EQ(sorted_1d_wp({2.0, -1.0, 0.5}, {0.5, 2.0, -1.0}, 2.0), 0.0);
  EXPECT_THROW(sorted_1d_wp({1.0}, {1.0, 2.0}, 1.0), InvalidArgument);
}

TEST(Sinkhorn, Examples) {
  std::mt19937_64 gen(9);
  const auto X = DiscreteMeasure::uniform(random_cloud(gen, 8, 1));
  const auto Y = DiscreteMeasure::uniform(random_cloud(gen, 8, 1));
  SinkhornSettings s;
  s.epsilon_min = 1e-3;
  const double exact = solve_assignment(cost_matrix(X, Y, 2.0)).cost;
  const auto r = sinkhorn(X, Y, 2.0, s);
  EXPECT_NEAR(r.cost, exact, 0.01 * exact);
  EXPECT_LE(r.diagnostics.marginal_violation, 1e-6);
  EXPECT_TRUE(r.diagnostics.converged);

  s.debiased = true;
  EXPECT_LE(std::abs(sinkhorn(X, X, 2.0, s).cost), 1e-6);
  SinkhornSettings bad;
  bad.epsilon_min = 0.0;
  EXPECT_THROW(sinkhorn(X, Y, 2.0, bad), InvalidArgument);
}

TEST(Sinkhorn, DebiasedWithinOnePercentOfExact) {
  std::mt19937_64 gen(10);
  SinkhornSettings s;
  s.debiased = true;
  for (std::size_t n : {8, 16, 32})
    for (std::size_t d : {1, 2, 3}) {
      const auto X = DiscreteMeasure::uniform(random_cloud(gen, n, d));
      const auto Y = DiscreteMeasure::uniform(random_cloud(gen, n, d));
      const double exact = solve_assignment(cost_matrix(X, Y, 2.0)).cost;
      EXPECT_NEAR(sinkhorn(X, Y, 2.0, s).cost, exact, 0.01 * exact) << n << " " << d;
    }
}

TEST(Sinkhorn, TruncatedKernelMatchesExactOnLargerInstance) {
  // small epsilon relative to the cost scale exercises the sparse path
  std::mt19937_64 gen(11);
  const auto X = DiscreteMeasure::uniform(random_cloud(gen, 300, 2));
  const auto Y = DiscreteMeasure::uniform(random_cloud(gen, 300, 2));
  const double exact = solve_assignment(cost_matrix(X, Y, 2.0)).cost;
  SinkhornSettings s;
  s.epsilon_min = 1e-3;
  const auto r = sinkhorn(X, Y, 2.0, s);
  EXPECT_NEAR(r.cost, exact, 0.02 * exact);
  EXPECT_LE(r.diagnostics.marginal_violation, 1e-4);
}

TEST(Proxy, DeterministicAndOrdered) {
  Stream s1(42), s2(42);
  Stream sx(7);
  const auto sample = sample_gaussian(24, 2, sx);
  const auto a = gaussian_proxy_wp(sample, 2.0, 8, s1);
  const auto b = gaussian_proxy_wp(sample, 2.0, 8, s2);
  EXPECT_EQ(a.cost, b.cost);
  EXPECT_EQ(a.reference_size, 24u * 8u);
  EXPECT_EQ(a.multiplier, 8);
  EXPECT_GT(a.cost, 0.0);
  Stream s3(1);
  EXPECT_THROW(gaussian_proxy_wp(sample, 2.0, 2, s3), InvalidArgument);
}

TEST(Proxy, MultiplierTrendIsMonotoneOnAverage) {
  // larger reference samples remove the reference's own fluctuation
  double m8 = 0.0, m128 = 0.0;
  for (int rep = 0; rep < 12; ++rep) {
    Stream sx = Stream::derive(3, 32, rep, StreamPurpose::sample_x);
    const auto sample = sample_gaussian(32, 2, sx);
    Stream r8 = Stream::derive(3, 32, rep, StreamPurpose::reference);
    Stream r128 = Stream::derive(3, 32, rep, StreamPurpose::reference);
    m8 += gaussian_proxy_wp(sample, 2.0, 8, r8).cost;
    m128 += gaussian_proxy_wp(sample, 2.0, 128, r128).cost;
  }
  EXPECT_GT(m8, m128);
}

TEST(Resources, DenseCapIsEnforced) {
  EXPECT_THROW(check_dense_size(std::size_t{1} << 20, std::size_t{1} << 12, "test"), ResourceLimitError);
  EXPECT_NO_THROW(check_dense_size(1024, 1024, "test"));
}

TEST(InstanceCsv, RoundTrip) {
  std::mt19937_64 gen(12);
  const auto X = random_cloud(gen, 5, 3), Y = random_cloud(gen, 5, 3);
  const auto path = (std::filesystem::temp_directory_path() / "gaussmatch_instance.csv").string();
  write_instance_csv(path, X, Y);
  const auto [X2, Y2] = read_instance_csv(path);
  EXPECT_EQ(X, X2);
  EXPECT_EQ(Y, Y2);
  std::filesystem::remove(path);
}
