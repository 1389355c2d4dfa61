#include <gtest/gtest.h>

#include <cmath>

#include "vinolab/bounds.hpp"

using namespace vinolab;

TEST(PermissibleExponent, OptimalRange) {
  const auto b = permissible_exponent(12, 3);
  EXPECT_EQ(b.lambda, 18);
  EXPECT_EQ(b.eta, 0);
  EXPECT_EQ(b.source, BoundSource::kOptimalRange);
}

TEST(PermissibleExponent, InterpolatedDegreeFour) {
  const auto b = permissible_exponent(10, 4);
  EXPECT_EQ(b.eta, Rational(10, 3));
  EXPECT_EQ(b.source, BoundSource::kInterpolated);
}

TEST(PermissibleExponent, TrivialForOneVariable) {
  const auto b = permissible_exponent(1, 2);
  EXPECT_EQ(b.lambda, 2);
  EXPECT_EQ(b.eta, 3);
  EXPECT_EQ(b.source, BoundSource::kTrivial);
}

TEST(PermissibleExponent, AnchorsReproduced) {
  for (int k = 2; k <= 8; ++k) {
    EXPECT_EQ(permissible_exponent(k + 1, k).lambda, k + 1);
    EXPECT_EQ(permissible_exponent(k * (k + 1), k).eta, 0);
  }
}

TEST(PermissibleExponent, NeverWorseThanAnySingleSource) {
  for (int k = 2; k <= 6; ++k)
    for (int s = 1; s <= 2 * k * (k + 1); ++s) {
      const auto b = permissible_exponent(s, k);
      const Rational floor_main = Rational(2 * s) - Rational(k * (k + 1), 2);
      EXPECT_LE(b.lambda, 2 * s);
      EXPECT_GE(b.lambda, s);
      EXPECT_GE(b.lambda, floor_main);
      EXPECT_GE(b.eta, 0);
      if (s >= k) EXPECT_LE(b.lambda, floor_main + classical_eta(s, k).eta);
      if (s >= k * (k + 1)) EXPECT_EQ(b.eta, 0);
    }
}

TEST(PermissibleExponent, EtaNonincreasingInS) {
  for (int k = 2; k <= 6; ++k)
    for (int s = k + 1; s < k * (k + 1); ++s)
      EXPECT_LE(permissible_exponent(s + 1, k).eta, permissible_exponent(s, k).eta) << s << " " << k;
}

TEST(PermissibleExponent, ThresholdEtaAtMostOne) {
  for (int k = 3; k <= 10; ++k) {
    const auto b = permissible_exponent(k * k + k - 2, k);
    EXPECT_LE(b.eta, 1) << k;
    EXPECT_EQ(b.eta, Rational(k - 2, k - 1)) << k;
  }
}

TEST(ClassicalEta, Examples) {
  EXPECT_EQ(classical_eta(2, 2).eta, 1);
  EXPECT_EQ(classical_eta(4, 2).eta, Rational(1, 2));
  EXPECT_THROW(classical_eta(1, 2), InvalidArgument);
}

TEST(ClassicalEta, BelowMajorantAndDecreasing) {
  for (int k = 2; k <= 10; ++k) {
    for (int s = k; s <= 20 * k * k; ++s) {
      const auto c = classical_eta(s, k);
      EXPECT_LE(static_cast<double>(c.eta), c.majorant * (1 + 1e-12)) << s << " " << k;
    }
    for (int m = 1; m < 20 * k; ++m) EXPECT_LT(classical_eta((m + 1) * k, k).eta, classical_eta(m * k, k).eta);
  }
}

TEST(TheoremTable, GoldenValues) {
  EXPECT_EQ(theorem_table(7).G_tilde, 109);
  EXPECT_EQ(theorem_table(20).G_tilde, 837);
  const auto t4 = theorem_table(4);
  EXPECT_EQ(t4.C_k, 40);
  EXPECT_LT(t4.C_k, 46);
  const auto t3 = theorem_table(3);
  EXPECT_EQ(t3.V_bound, 13);
  EXPECT_EQ(t3.W_bound, 10);
  EXPECT_EQ(t3.sigma_inv, 12);
  EXPECT_EQ(t3.sigma_inv_log, 13);
  EXPECT_EQ(t3.tau_inv, 24);
  EXPECT_EQ(t3.S_k, 20);
  for (int k = 2; k <= 30; ++k) {
    const auto t = theorem_table(k);
    for (auto v : {t.V_bound, t.W_bound, t.G_tilde, t.sigma_inv, t.sigma_inv_log, t.tau_inv, t.C_k, t.S_k}) EXPECT_GT(v, 0);
  }
  EXPECT_THROW(theorem_table(1), InvalidArgument);
}

TEST(GtildeComparison, Rows) {
  const auto rows = gtilde_comparison();
  ASSERT_EQ(rows.size(), 14u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.current, 2 * r.k * r.k + 2 * r.k - 3);
    EXPECT_LT(r.current, r.prior);
  }
  EXPECT_EQ(gtilde_comparison(9).current, 177);
  EXPECT_EQ(gtilde_comparison(9).prior, 365);
  EXPECT_EQ(gtilde_comparison(14).current, 417);
  EXPECT_EQ(gtilde_comparison(14).prior, 1112);
  EXPECT_EQ(gtilde_comparison(8).current, 141);
  EXPECT_THROW(gtilde_comparison(6), InvalidArgument);
}

TEST(HuaComparison, CurrentThresholdsWinFromDegreeFourAndFive) {
  for (const auto& r : hua_comparison()) {
    if (r.k >= 4) EXPECT_LT(r.C_current, r.C_hua);
    if (r.k >= 5) EXPECT_LT(r.S_current, r.S_hua);
  }
}

TEST(Decimal, Rendering) {
  EXPECT_EQ(to_decimal(Rational(10, 3)), "3.333333");
  EXPECT_EQ(to_decimal(Rational(2, 3), 2), "0.67");
  EXPECT_EQ(to_decimal(Rational(-1, 8), 2), "-0.13");
  EXPECT_EQ(to_decimal(Rational(18), 0), "18");
}
