#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "trieclt/stats.hpp"

namespace trieclt::mc {
namespace {

TEST(Stats, MomentsMatchTwoPassFormulas) {
  std::mt19937_64 gen(3);
  std::gamma_distribution<double> g(2.0, 1.5);
  std::vector<double> x(5000);
  for (auto& v : x) v = g(gen);
  const double n = double(x.size());
  double mean = 0;
  for (double v : x) mean += v;
  mean /= n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  auto m = sample_moments(x);
  EXPECT_NEAR(m.mean, mean, 1e-12);
  EXPECT_NEAR(m.var, m2 * n / (n - 1), 1e-10);
  EXPECT_NEAR(m.skew, m3 / std::pow(m2, 1.5), 1e-9);
  EXPECT_NEAR(m.exkurt, m4 / (m2 * m2) - 3, 1e-9);
  EXPECT_NEAR(m.se_mean, std::sqrt(m.var / n), 1e-12);
  // Gamma(2): skewness 2/sqrt(2), excess kurtosis 3.
  EXPECT_NEAR(m.skew, std::sqrt(2.0), 0.15);
  EXPECT_NEAR(m.exkurt, 3, 1.0);
}

TEST(Stats, Covariance) {
  std::vector<double> x{1, 2, 3, 4, 5}, y{2, 4, 6, 8, 10}, z{5, 4, 3, 2, 1};
  EXPECT_NEAR(sample_covariance(x, y), 5, 1e-14);
  EXPECT_NEAR(sample_covariance(x, z), -2.5, 1e-14);
  EXPECT_GT(covariance_se(x, y), 0);
}

TEST(Stats, NormalCdf) {
  EXPECT_NEAR(normal_cdf(0), 0.5, 1e-16);
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
  EXPECT_NEAR(normal_cdf(-3), 0.0013498980316301, 1e-14);
}

TEST(Stats, KolmogorovSmirnov) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> z(3, 2);
  std::vector<double> x(5000);
  for (auto& v : x) v = z(gen);
  EXPECT_LT(ks_to_fitted_normal(x), 0.03);
  std::exponential_distribution<double> e(1.0);
  for (auto& v : x) v = e(gen);
  EXPECT_GT(ks_to_fitted_normal(x), 0.05);
}

// Rounded normal data look far from normal to the continuous KS statistic; the lattice
// correction compares against the discretised normal instead.
TEST(Stats, KolmogorovSmirnovLattice) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> z(100, 3);
  std::vector<double> x(5000);
  for (auto& v : x) v = std::round(z(gen));
  EXPECT_GT(ks_to_fitted_normal(x), 0.03);
  EXPECT_LT(ks_to_fitted_normal(x, 1.0), 0.03);
}

}  // namespace
}  // namespace trieclt::mc
