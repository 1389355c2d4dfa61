#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "vinolab/expsum.hpp"

using namespace vinolab;
using vinolab::testing::Gen;

namespace {

// Test-side oracle: direct double-precision evaluation for small X.
Complex naive_weyl(const std::vector<double>& alpha, std::int64_t first, std::int64_t step, std::int64_t X,
                   const ExponentSet& e) {
  std::complex<long double> acc = 0;
  for (std::int64_t x = first; x <= X; x += step) {
    long double phase = 0;
    for (std::size_t j = 0; j < e.size(); ++j) phase += alpha[j] * std::pow(static_cast<long double>(x), e[j]);
    phase -= std::floor(phase);
    acc += std::polar(1.0L, 2 * std::numbers::pi_v<long double> * phase);
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

std::vector<double> random_alpha(Gen& g, std::size_t n) {
  std::vector<double> a;
  for (std::size_t i = 0; i < n; ++i) a.push_back(std::ldexp(static_cast<double>(g.integer(-(1 << 20), 1 << 20)), -20));
  return a;
}

}  // namespace

TEST(WeylSum, Examples) {
  const auto e = ExponentSet({1, 2, 3});
  EXPECT_NEAR(std::abs(weyl_sum(std::vector<double>{0, 0, 0}, 7, e) - Complex(7, 0)), 0, 1e-12);
  EXPECT_NEAR(std::abs(weyl_sum(std::vector<double>{0.5}, 2, ExponentSet({1}))), 0, 1e-12);
}

TEST(WeylSum, BoundedByLengthAndMatchesOracle) {
  Gen g(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto e = g.exponent_set(4, 3);
    const auto alpha = random_alpha(g, e.size());
    const std::int64_t X = g.integer(1, 300);
    const Complex f = weyl_sum(alpha, X, e);
    EXPECT_LE(std::abs(f), X + 1e-9);
    EXPECT_NEAR(std::abs(f - naive_weyl(alpha, 1, 1, X, e)), 0, 1e-8);
  }
}

TEST(WeylSum, ExactReductionAtLargeX) {
  // alpha = 1/2^k: f = sum of e(x^2 / 2^k) is periodic in x with period 2^k.
  const auto e = ExponentSet({2});
  const double a = std::ldexp(1.0, -10);
  const Complex period = weyl_sum(std::vector<double>{a}, 1024, e);
  const Complex many = weyl_sum(std::vector<double>{a}, 1024 * 1000, e);
  EXPECT_NEAR(std::abs(many - 1000.0 * period), 0, 1e-6);
  // Rational path agrees with the dyadic path on dyadic inputs.
  const Complex exact = weyl_sum(std::vector<Rational>{Rational(1, 1024)}, 1024 * 1000, e);
  EXPECT_NEAR(std::abs(many - exact), 0, 1e-6);
}

TEST(WeylSum, TinyCoefficientsUseWideReduction) {
  const auto e = ExponentSet({1, 3});
  const std::vector<double> alpha{1e-40, std::ldexp(3.0, -7)};
  EXPECT_NEAR(std::abs(weyl_sum(alpha, 500, e) - naive_weyl(alpha, 1, 1, 500, e)), 0, 1e-9);
}

TEST(RestrictedWeylSum, Examples) {
  const auto e1 = ExponentSet({1});
  EXPECT_NEAR(std::abs(restricted_weyl_sum(std::vector<Rational>{Rational(1, 3)}, 9, e1, 3, 1, 3) - Complex(3, 0)), 0,
              1e-12);
  Gen g(12);
  const auto e = ExponentSet({1, 2, 3});
  for (int trial = 0; trial < 20; ++trial) {
    const auto alpha = random_alpha(g, 3);
    const Complex f = weyl_sum(alpha, 10, e);
    EXPECT_NEAR(std::abs(restricted_weyl_sum(alpha, 10, e, 3, 0, 1) - f), 0, 1e-12);
    Complex parts = 0;
    for (std::int64_t xi = 1; xi <= 3; ++xi) parts += restricted_weyl_sum(alpha, 10, e, 3, 1, xi);
    EXPECT_NEAR(std::abs(parts - f), 0, 1e-12);
    Complex parts9 = 0;
    for (std::int64_t xi = 1; xi <= 9; ++xi) parts9 += restricted_weyl_sum(alpha, 40, e, 3, 2, xi);
    EXPECT_NEAR(std::abs(parts9 - weyl_sum(alpha, 40, e)), 0, 1e-12);
  }
  EXPECT_THROW(restricted_weyl_sum(std::vector<double>{0.1}, 10, e1, 4, 1, 1), InvalidArgument);
  EXPECT_THROW(restricted_weyl_sum(std::vector<double>{0.1}, 10, e1, 3, 1, 4), InvalidArgument);
}

TEST(CompleteSum, Examples) {
  EXPECT_NEAR(std::abs(complete_sum({1, {1}}, ExponentSet({1})) - Complex(1, 0)), 0, 1e-12);
  EXPECT_NEAR(std::abs(complete_sum({4, {1}}, ExponentSet({1}))), 0, 1e-12);
  EXPECT_NEAR(std::abs(complete_sum({2, {1, 1}}, ExponentSet({1, 2})) - Complex(2, 0)), 0, 1e-12);
  // Quadratic Gauss sum: |S(p, (0, a))| = sqrt(p) for odd prime p.
  EXPECT_NEAR(std::abs(complete_sum({11, {11, 3}}, ExponentSet({1, 2}))), std::sqrt(11.0), 1e-10);
}

TEST(CompleteSum, DependsOnlyOnResidues) {
  Gen g(13);
  for (int trial = 0; trial < 50; ++trial) {
    const std::int64_t q = g.integer(1, 60);
    const auto e = g.exponent_set(4, 3);
    RationalPoint p{q, {}}, shifted{q, {}};
    for (std::size_t j = 0; j < e.size(); ++j) {
      p.a.push_back(g.integer(1, q));
      shifted.a.push_back(p.a.back() + q * g.integer(-5, 5));
    }
    const Complex a = complete_sum(p, e), b = complete_sum(shifted, e);
    EXPECT_EQ(a, b);
  }
}

TEST(OscillatoryIntegral, Examples) {
  const auto e = ExponentSet({1});
  EXPECT_NEAR(std::abs(oscillatory_integral({0.0}, e, 1.0) - Complex(1, 0)), 0, 1e-12);
  EXPECT_NEAR(std::abs(oscillatory_integral({1.0}, e, 1.0)), 0, 1e-12);
  // Closed form: int_0^X e(b g) dg = (e(b X) - 1) / (2 pi i b).
  const double b = 0.37, X = 5.5;
  const std::complex<double> i(0, 1);
  const Complex want = (std::exp(2 * std::numbers::pi * i * b * X) - 1.0) / (2 * std::numbers::pi * i * b);
  EXPECT_NEAR(std::abs(oscillatory_integral({b}, e, X) - want), 0, 1e-12);
}

TEST(OscillatoryIntegral, ConjugateSymmetryAndStability) {
  Gen g(14);
  const auto e = ExponentSet({1, 2, 3});
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> beta, neg;
    for (int j = 0; j < 3; ++j) {
      beta.push_back(static_cast<double>(g.integer(-3000, 3000)) / 1000.0);
      neg.push_back(-beta.back());
    }
    const Complex a = oscillatory_integral(beta, e, 1.0);
    const Complex b = oscillatory_integral(neg, e, 1.0);
    EXPECT_NEAR(std::abs(a - std::conj(b)), 0, 1e-12);
    const Complex more = oscillatory_integral(beta, e, 1.0, 4096);
    EXPECT_LE(std::abs(a - more), 1e-6 * std::max(std::abs(a), 1e-3));
  }
}

TEST(DftMeanValue, Examples) {
  EXPECT_EQ(dft_mean_value(ExponentSet({1, 2}), 2, 2), 6);
  EXPECT_EQ(dft_mean_value(ExponentSet({1}), 1, 3), 3);
  EXPECT_EQ(dft_mean_value(ExponentSet({1, 2}), 2, 3), 15);
  EXPECT_THROW(dft_mean_value(ExponentSet({1, 2, 3}), 3, 20), TooLarge);
}

TEST(DftMeanValue, MatchesConvolutionEngine) {
  for (const auto& e : {ExponentSet({1}), ExponentSet({2}), ExponentSet({1, 2})})
    for (int s = 1; s <= 2; ++s)
      for (std::int64_t X = 1; X <= 4; ++X) EXPECT_EQ(dft_mean_value(e, s, X), mean_value(e, s, {1, X}));
  for (std::int64_t X = 1; X <= 3; ++X)
    EXPECT_EQ(dft_mean_value(ExponentSet({1, 2, 3}), 1, X), mean_value(ExponentSet({1, 2, 3}), 1, {1, X}));
}

TEST(RationalApproximationGap, Examples) {
  EXPECT_NEAR(rational_approximation_gap({1, {1}}, 5, ExponentSet({1})), 0, 1e-12);
  EXPECT_NEAR(rational_approximation_gap({2, {1}}, 4, ExponentSet({1})), 0, 1e-12);
}

TEST(RationalApproximationGap, BelowQ) {
  Gen g(15);
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t X = g.integer(1, 500);
    const std::int64_t q = g.integer(1, X);
    const auto e = g.exponent_set(3, 3);
    RationalPoint p{q, {}};
    for (std::size_t j = 0; j < e.size(); ++j) p.a.push_back(g.integer(1, q));
    EXPECT_LT(rational_approximation_gap(p, X, e), static_cast<double>(q));
  }
}
