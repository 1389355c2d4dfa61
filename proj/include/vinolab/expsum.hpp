#pragma once

// Weyl sums, complete sums and oscillatory integrals. All phases are reduced
// modulo 1 exactly (in integer arithmetic) before the exponential is taken.

#include <complex>
#include <cstdint>
#include <vector>

#include "vinolab/common.hpp"
#include "vinolab/counting.hpp"

namespace vinolab {

using Complex = std::complex<double>;

/// The rational point a/q: one numerator per exponent of the owning set.
struct RationalPoint {
  std::int64_t q = 1;
  std::vector<std::int64_t> a;

  /// Throws InvalidArgument unless q >= 1, 1 <= a_j <= q and
  /// gcd(q, a_1, ..., a_k) = 1.
  void validate() const;
};

/// sum_{x=1}^{X} e(sum_j alpha_j x^j). Each double alpha_j is taken as the
/// exact dyadic rational it represents.
Complex weyl_sum(const std::vector<double>& alpha, std::int64_t X, const ExponentSet& exponents);
/// Same sum with exact rational coefficients.
Complex weyl_sum(const std::vector<Rational>& alpha, std::int64_t X, const ExponentSet& exponents);

/// Weyl sum restricted to x = xi (mod p^c), 1 <= x <= X; requires p prime
/// and 1 <= xi <= p^c.
Complex restricted_weyl_sum(const std::vector<double>& alpha, std::int64_t X, const ExponentSet& exponents,
                            std::int64_t p, int c, std::int64_t xi);
Complex restricted_weyl_sum(const std::vector<Rational>& alpha, std::int64_t X, const ExponentSet& exponents,
                            std::int64_t p, int c, std::int64_t xi);

/// S(q, a) = sum_{r=1}^{q} e((sum_j a_j r^j) / q). Depends only on a mod q.
Complex complete_sum(const RationalPoint& point, const ExponentSet& exponents);

/// int_0^X e(sum_j beta_j g^j) dg by composite 16-point Gauss-Legendre.
/// `panels` is raised to at least 8 (1 + sum_j |beta_j| X^j) and doubled
/// until two successive results agree to 1e-9 of max(|I|, 1e-3 X).
/// Throws NoConvergence if they still differ by more than 1e-6 of that scale.
Complex oscillatory_integral(const std::vector<double>& beta, const ExponentSet& exponents, double X,
                             std::int64_t panels = 8);

/// The mean value J (as in mean_value on [1, X]) recovered from the finite
/// orthogonality relation on the grid prod_j Z/L_j, L_j = 2 s X^j + 1. The
/// exponential sums are accumulated exactly in Z[zeta_N]; throws TooLarge
/// if prod L_j > 1e8 or X^s > 1e6.
Count dft_mean_value(const ExponentSet& exponents, int s, std::int64_t X);

/// |f(a/q; X) - (X/q) S(q, a)|, which is below q.
double rational_approximation_gap(const RationalPoint& point, std::int64_t X, const ExponentSet& exponents);

}  // namespace vinolab
