#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "trieclt/analytics.hpp"
#include "trieclt/error.hpp"

namespace trieclt::analytics {
namespace {

using trieclt::testing::p37;
using trieclt::testing::quarter;
using trieclt::testing::sym2;
using trieclt::testing::trie_of;

TEST(Fringe, ExpectedInternalNodes) {
  EXPECT_NEAR(expected_internal(sym2(), 2).value, 2, 1e-13);
  EXPECT_EQ(expected_internal(sym2(), 1).value, 0);
  // E_2 = 1 / (1 - rho(2)) for any model.
  EXPECT_NEAR(expected_internal(p37(), 2).value, 1 / (1 - 0.58), 1e-13);

  for (unsigned k : {3u, 6u}) {
    const ProbModel m = p37();
    StringSource src(m, 7);
    const int trials = 20000;
    double s = 0, ss = 0;
    for (int i = 0; i < trials; ++i) {
      const double v = double(sample_fixed(k, src.derive(i)).internal_count());
      s += v;
      ss += v * v;
    }
    const double mean = s / trials, se = std::sqrt((ss / trials - mean * mean) / trials);
    EXPECT_NEAR(expected_internal(m, k).value, mean, 4 * se);
  }
}

TEST(Fringe, ExpectedInternalBeyondRecursion) {
  try {
    expected_internal(sym2(), 5000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ek_unavailable);
  }
  EkOptions o;
  o.mc_trials = 20;
  auto e = expected_internal(sym2(), 1200, o);
  EXPECT_EQ(e.method, Method::monte_carlo);
  const double exact = expected_internal(sym2(), 1000).value * 1200 / 1000;
  EXPECT_NEAR(e.value, exact, 0.02 * exact);
}

TEST(Fringe, PatternProbability) {
  const ProbModel m = quarter();
  const double p = 0.25, q = 0.75;
  EXPECT_NEAR(pattern_probability(m, trie_of({"0", "1"})), 2 * p * q, 1e-15);
  EXPECT_EQ(pattern_probability(m, Trie::bullet(2)), 1);
  // Over all shapes of T_2 the probabilities sum to one: a chain of shared letters, then a split.
  // Chains with the same letter counts are equally likely, so each count is built once.
  double total = 0;
  for (int depth = 0; depth <= 60; ++depth) {
    for (int ones = 0; ones <= depth; ++ones) {
      const std::string prefix = std::string(ones, '1') + std::string(depth - ones, '0');
      std::vector<LetterStream> s{LetterStream::parse(prefix + "0"), LetterStream::parse(prefix + "1")};
      const Trie shape = build_trie(StringSet::explicit_streams(std::move(s)), 2);
      total += std::exp(std::lgamma(depth + 1.0) - std::lgamma(ones + 1.0) - std::lgamma(depth - ones + 1.0)) *
               pattern_probability(m, shape);
    }
  }
  EXPECT_NEAR(total, 1, 1e-9);
}

TEST(Fringe, DistributionLimits) {
  const double H = entropy(p37());
  EXPECT_NEAR(fringe_dist(p37(), 1u).value, H / (1 + H), 1e-15);
  EXPECT_NEAR(fringe_dist(p37(), 1u).value, 0.37922, 1e-5);
  EXPECT_NEAR(fringe_dist(p37(), 2u).value, 0.31039, 1e-5);
  for (unsigned k = 2; k < 8; ++k)
    EXPECT_NEAR(fringe_dist(p37(), k).value, 1 / ((1 + H) * k * (k - 1.0)), 1e-15);
  // Summed over all k the fractions give 1.
  double total = fringe_dist(p37(), 1u).value;
  for (unsigned k = 2; k < 200000; ++k) total += 1 / ((1 + H) * k * (k - 1.0));
  EXPECT_NEAR(total, 1, 1e-5);

  const double Hq = entropy(quarter());
  const double pq = 0.25 * 0.75;
  EXPECT_NEAR(fringe_dist(quarter(), trie_of({"0", "1"})).value, 2 * pq / ((1 + Hq) * 2), 1e-14);
}

TEST(Fringe, PeriodicDistributionOscillatesAroundTheLimit) {
  const double H = entropy(sym2());
  double lo = INFINITY, hi = -INFINITY;
  for (double n = 1000; n < 2000; n *= 1.05) {
    const double v = fringe_dist(sym2(), 2u, n).value;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double limit = 1 / ((1 + H) * 2);
  EXPECT_LT(hi - lo, 1e-4);
  EXPECT_NEAR(0.5 * (lo + hi), limit, 1e-4);
  EXPECT_THROW(fringe_dist(sym2(), 2u), Error);
}

TEST(Fringe, CovarianceWithSize) {
  for (unsigned k : {2u, 3u}) {
    const ProbModel m = p37();
    const double H = entropy(m);
    auto size = make_analytic(Toll::size(), m);
    const double mfv = mellin_fV_size_fringe(m, k, -1.0, expected_internal(m, k).value).real();
    EXPECT_NEAR(asym_cov_size_fringe(m, k, 3.0).value, mfv / H - 1 / (H * H * k * (k - 1.0)), 1e-12);
    // The Mellin transform of the bilinear fV, checked by quadrature.
    const double ek = expected_internal(m, k).value;
    auto quad = mellin_numeric([&](double x) { return fV_size_fringe(m, k, x, ek); }, -1.0);
    EXPECT_NEAR(quad.value.real(), mfv, 1e-8);
    (void)size;
  }
}

TEST(Fringe, FluctuationVariance) {
  const ProbModel m = p37();
  const double H = entropy(m);
  auto size = make_analytic(Toll::size(), m);
  const double mfv = mellin_fV(size, -1.0).value.real();
  const double z = 1 + H;
  EXPECT_NEAR(fringe_fluct_var(m, 1, 1e5).value, (H * H * H * mfv - H * H) / (z * z * z * z), 1e-12);
  EXPECT_GT(fringe_fluct_var(m, 2, 1e5).value, 0);
}

TEST(Bucket, Constants) {
  for (const auto& m : {sym2(), p37()}) {
    EXPECT_NEAR(bucket_constants(m, 3, 0).value, 1.0 / 3, 1e-15);
    EXPECT_NEAR(bucket_constants(m, 1, 1).value, entropy(m), 1e-13);
    for (auto [b, k] : {std::pair{2u, 2u}, {2u, 1u}, {3u, 1u}, {3u, 2u}, {4u, 3u}}) {
      auto closed = bucket_constants(m, b, k);
      auto quad = bucket_constant_quadrature(m, b, k);
      EXPECT_NEAR(closed.value, quad.value, 1e-8) << b << "," << k;
    }
    EXPECT_NEAR(bucket_constant_quadrature(m, 3, 0).value, 1.0 / 3, 1e-8);
  }
  EXPECT_NEAR(bucket_constants(sym2(), 2, 2).value, 0.25, 1e-13);
}

TEST(Bucket, MellinAwayFromMinusOne) {
  auto at = make_analytic(Toll::bucket_occupancy(3, 2), p37());
  for (cplx s : {cplx(-1.3), cplx(-2.5, 1.0), cplx(-0.4)}) {
    if (!at.strip.contains(s.real())) continue;
    EXPECT_LT(std::abs(mellin_fE(at, s).value - mellin_fE_quadrature(at, s).value), 1e-8);
  }
}

}  // namespace
}  // namespace trieclt::analytics
