#pragma once

// Exact exponent bookkeeping for mean values: permissible exponents and the
// thresholds that follow from them.

#include <cstdint>
#include <string>
#include <vector>

#include "vinolab/common.hpp"

namespace vinolab {

/// Where a permissible exponent comes from. Declared in order of
/// preference when several sources give the same value.
enum class BoundSource {
  kOptimalRange,  // s >= k(k+1): lambda = 2s - k(k+1)/2
  kNearDiagonal,  // s = k+1: lambda = k+1
  kInterpolated,  // linear in s between two anchors
  kClassical,     // eta = k^2 (1 - 1/k)^{floor(s/k)} / 2, s >= k
  kTrivial,       // lambda = 2s
};

std::string to_string(BoundSource source);

/// J_{s,k}(X) << X^{lambda + eps}; eta = lambda - 2s + k(k+1)/2.
struct ExponentBound {
  int s = 1;
  int k = 2;
  Rational lambda;
  Rational eta;
  BoundSource source = BoundSource::kTrivial;
};

/// Smallest permissible exponent over all anchors and all interpolations
/// between two anchors s1 < s < s2. Requires s >= 1, 2 <= k <= 64.
ExponentBound permissible_exponent(int s, int k);

struct ClassicalEta {
  Rational eta;
  /// k^2 exp(-s/k^2), an upper bound for eta.
  double majorant = 0;
};

/// k^2 (1 - 1/k)^{floor(s/k)} / 2. Requires s >= k >= 2.
ClassicalEta classical_eta(int s, int k);

struct TheoremTable {
  int k = 2;
  /// Variables for the asymptotic formula in the mean value.
  std::int64_t V_bound = 0;
  /// Variables for a multigrade witness with any number of classes.
  std::int64_t W_bound = 0;
  /// Variables for the asymptotic formula in Waring's problem.
  std::int64_t G_tilde = 0;
  /// Weyl-type exponent 1/sigma and its variant with a log factor.
  std::int64_t sigma_inv = 0;
  std::int64_t sigma_inv_log = 0;
  /// Minor-arc exponent 1/tau.
  std::int64_t tau_inv = 0;
  /// Moment thresholds for f_k and for the system without degree k-1.
  std::int64_t C_k = 0;
  std::int64_t S_k = 0;
};

/// Requires k >= 2.
TheoremTable theorem_table(int k);

struct GtildeRow {
  int k = 0;
  std::int64_t current = 0;
  std::int64_t prior = 0;
};

/// Rows for k = 7..20 against the previously recorded bounds.
std::vector<GtildeRow> gtilde_comparison();
/// The row for one k in [7, 20].
GtildeRow gtilde_comparison(int k);

struct HuaRow {
  int k = 0;
  std::int64_t C_current = 0;
  std::int64_t C_hua = 0;
  std::int64_t S_current = 0;
  std::int64_t S_hua = 0;
};

/// k = 3, 4, 5 against the tabulated moment thresholds.
std::vector<HuaRow> hua_comparison();

/// Decimal rendering with the given number of digits after the point.
std::string to_decimal(const Rational& r, int digits = 6);

}  // namespace vinolab
