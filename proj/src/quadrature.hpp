#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace vinolab::detail {

/// 16-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre16 {
  static constexpr int kOrder = 16;
  std::array<double, kOrder> node{};
  std::array<double, kOrder> weight{};

  GaussLegendre16() {
    // Newton iteration on P_16 from the Chebyshev-like initial guesses.
    for (int i = 0; i < kOrder / 2; ++i) {
      long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (kOrder + 0.5L));
      long double dp = 0;
      for (int it = 0; it < 100; ++it) {
        long double p0 = 1, p1 = x;
        for (int n = 2; n <= kOrder; ++n) {
          const long double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
          p0 = p1;
          p1 = p2;
        }
        dp = kOrder * (x * p1 - p0) / (x * x - 1);
        const long double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-19L) break;
      }
      const long double w = 2 / ((1 - x * x) * dp * dp);
      node[i] = static_cast<double>(-x);
      node[kOrder - 1 - i] = static_cast<double>(x);
      weight[i] = weight[kOrder - 1 - i] = static_cast<double>(w);
    }
  }
};

inline const GaussLegendre16& gauss_legendre16() {
  static const GaussLegendre16 rule;
  return rule;
}

}  // namespace vinolab::detail
