#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "trieclt/analytics.hpp"
#include "trieclt/error.hpp"

namespace trieclt::analytics {
namespace {

using std::numbers::ln2;
using trieclt::testing::p37;
using trieclt::testing::quarter;
using trieclt::testing::sym2;

TEST(Protected, ClosedValues) {
  EXPECT_NEAR(protected_constant(sym2(), 2).value, 1.25 - ln2, 1e-13);
  EXPECT_NEAR(protected_constant(sym2(), 3).value, 1897.0 / 1152 - 2 * ln2, 1e-13);
  EXPECT_EQ(protected_constant(p37(), 1).value, 1);
  for (const auto& m : {p37(), quarter()}) {
    const double p = m.p(0), q = m.p(1);
    EXPECT_NEAR(protected_constant(m, 2).value, 1 - entropy(m) + p * q, 1e-12);
  }
}

TEST(Protected, SubsetFormulaMatchesSymmetricShortcut) {
  for (std::size_t r : {2u, 3u}) {
    const ProbModel m = ProbModel::symmetric(r);
    // Declared span keeps the general path from detecting symmetry.
    const ProbModel general(std::vector<double>(r, 1.0 / r), std::log(double(r)));
    for (unsigned k : {2u, 3u}) {
      if (std::pow(r, k - 1) > 20) continue;
      EXPECT_NEAR(protected_constant(m, k).value, symmetric_protected_constant(std::pow(r, k - 1)).value,
                  1e-10);
      EXPECT_NEAR(protected_constant(general, k).value, protected_constant(m, k).value, 1e-10);
    }
  }
}

TEST(Protected, QuadratureCrossCheck) {
  for (const auto& m : {sym2(), p37()})
    for (unsigned k : {2u, 3u, 4u})
      EXPECT_NEAR(protected_constant_quadrature(m, k).value, protected_constant(m, k).value, 1e-8)
          << m.label() << " k=" << k;
}

TEST(Protected, MellinClosedFormMatchesQuadrature) {
  auto at = make_analytic(Toll::k_protected(2), p37());
  for (cplx s : {cplx(-1.5), cplx(-0.5), cplx(-1.00001), cplx(-1.2, 2.0)})
    EXPECT_LT(std::abs(mellin_fE(at, s).value - mellin_fE_quadrature(at, s).value), 1e-8);
}

TEST(Protected, CombinatorialBlowup) {
  const ProbModel m = ProbModel::from_rationals({{1, 5}, {1, 5}, {3, 5}});
  try {
    protected_constant(m, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::combinatorial_blowup);
  }
  // The symmetric shortcut has no such limit.
  EXPECT_GT(protected_constant(ProbModel::symmetric(2), 12).value, 0);
}

TEST(Protected, AsymptoticTrend) {
  EXPECT_NEAR(protected_asymptotic(2, 10), std::pow(2.0, -10), 1e-18);
  double prev = INFINITY;
  for (unsigned k = 4; k <= 12; ++k) {
    const double ratio = protected_constant(sym2(), k).value / protected_asymptotic(2, k);
    EXPECT_GT(ratio, 1);
    EXPECT_LT(ratio, prev);
    prev = ratio;
  }
  const double r10 = protected_constant(sym2(), 10).value / protected_asymptotic(2, 10);
  EXPECT_NEAR(r10, 1.23, 0.01);
}

TEST(Protected, SymmetricLargeR) {
  // MPFR and quadrature paths meet at the switch-over.
  const double a = symmetric_protected_constant(1 << 14).value;
  EXPECT_GT(a, 0);
  EXPECT_LT(2.0 * (1 << 14) * a, 2.0 * 512 * symmetric_protected_constant(512).value);
  const double b = symmetric_protected_constant((1 << 14) + 1).value;
  EXPECT_NEAR(a, b, 1e-4 * a);
}

}  // namespace
}  // namespace trieclt::analytics
