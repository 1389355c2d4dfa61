#pragma once

// Truncated singular series and singular integral of the mean value, exact
// Waring counts and the heuristic main term for them.

#include <cstdint>
#include <vector>

#include "vinolab/common.hpp"
#include "vinolab/counting.hpp"
#include "vinolab/expsum.hpp"

namespace vinolab {

struct SeriesTruncation {
  std::int64_t Q = 0;
  /// terms[q-1] = A(q) = sum over a mod q with gcd(q, a) = 1 of |S(q, a)/q|^{2s}
  std::vector<double> terms;
  double value = 0;
};

/// sum_{q <= Q} A(q). Requires Q <= 200 and k <= 3.
SeriesTruncation singular_series(int s, int k, std::int64_t Q);
/// The single term A(q).
double singular_series_term(int s, int k, std::int64_t q);

struct IntegralTruncation {
  double box = 0;
  /// Grid points per unit length of the final evaluation.
  std::int64_t grid = 0;
  double value = 0;
  /// Value on the coarser grid (half as many points per unit length).
  double coarse_value = 0;
  /// Contribution of the outer shell max_j |beta_j| > 0.9 box.
  double tail = 0;
};

/// int over [-box, box]^k of |I(beta; 1)|^{2s} d beta, with
/// I(beta; 1) = int_0^1 e(beta_1 g + ... + beta_k g^k) dg, by the trapezoid
/// rule with spacing 1/grid. Because |I|^{2s} is the Fourier transform of a
/// density supported in [-s, s]^k, the unbounded rule is exact once
/// grid > s, so only box truncation remains. grid defaults to s + 1 and is
/// doubled once for the stability check. Requires 2s > k(k+1)/2 + k or k = 1.
/// Throws NoConvergence if the two grids differ by more than 1e-3 relative.
IntegralTruncation singular_integral(int s, int k, double box = 50, std::int64_t grid = 0);

/// R_{s,k}(n): ordered representations n = x_1^k + ... + x_s^k, x_i >= 1.
/// Throws TooLarge if s n > 1e8.
Count waring_count(int s, int k, std::int64_t n);
/// R_{s,k}(n) for several n from one table build up to max(ns).
std::vector<Count> waring_counts(int s, int k, const std::vector<std::int64_t>& ns);

/// sum over a mod q with gcd(a, q) = 1 of (S_k(q, a)/q)^s e(-n a/q).
Complex waring_series_term(int s, int k, std::int64_t n, std::int64_t q);

struct SeriesValue {
  double real = 0;
  double imag = 0;
};

/// sum_{q <= Q} of the terms above. Requires Q <= 500.
SeriesValue waring_singular_series(int s, int k, std::int64_t n, std::int64_t Q);

/// Gamma(1 + 1/k)^s / Gamma(s/k) * 𝔖 * n^{s/k - 1} with the series cut at Q.
/// Requires s > k.
double waring_main_term(int s, int k, std::int64_t n, std::int64_t Q);
/// The factor Gamma(1 + 1/k)^s / Gamma(s/k) * n^{s/k - 1} alone.
double waring_gamma_factor(int s, int k, std::int64_t n);

/// J_{s,k}(X) / X^{2s - k(k+1)/2}.
double asymptotic_ratio(int k, int s, std::int64_t X, const EngineOptions& options = {});
/// The same ratio for an already computed J.
double asymptotic_ratio(int k, int s, std::int64_t X, const Count& J);

}  // namespace vinolab
