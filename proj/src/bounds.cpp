#include "vinolab/bounds.hpp"

#include <cmath>
#include <map>
#include <optional>

namespace vinolab {

std::string to_string(BoundSource source) {
  switch (source) {
    case BoundSource::kOptimalRange: return "optimal-range";
    case BoundSource::kNearDiagonal: return "near-diagonal";
    case BoundSource::kInterpolated: return "interpolated";
    case BoundSource::kClassical: return "classical";
    case BoundSource::kTrivial: return "trivial";
  }
  return "unknown";
}

namespace {

struct Anchor {
  Rational lambda;
  BoundSource source;
};

bool better(const Rational& lambda, BoundSource source, const Anchor& current) {
  return lambda < current.lambda || (lambda == current.lambda && source < current.source);
}

Rational main_term(int s, int k) { return Rational(2 * s) - Rational(k * (k + 1), 2); }

/// Best bound at s that does not interpolate.
Anchor anchor_at(int s, int k) {
  Anchor a{Rational(2 * s), BoundSource::kTrivial};
  if (s >= k) {
    const Rational lambda = main_term(s, k) + classical_eta(s, k).eta;
    if (better(lambda, BoundSource::kClassical, a)) a = {lambda, BoundSource::kClassical};
  }
  if (s == k + 1 && better(Rational(k + 1), BoundSource::kNearDiagonal, a)) a = {Rational(k + 1), BoundSource::kNearDiagonal};
  if (s >= k * (k + 1) && better(main_term(s, k), BoundSource::kOptimalRange, a))
    a = {main_term(s, k), BoundSource::kOptimalRange};
  return a;
}

}  // namespace

ClassicalEta classical_eta(int s, int k) {
  if (k < 2 || s < k) throw InvalidArgument("classical eta needs s >= k >= 2");
  const Rational ratio(k - 1, k);
  Rational p = 1;
  for (int i = 0; i < s / k; ++i) p *= ratio;
  ClassicalEta out;
  out.eta = Rational(k * k, 2) * p;
  out.majorant = k * k * std::exp(-static_cast<double>(s) / (k * k));
  return out;
}

ExponentBound permissible_exponent(int s, int k) {
  if (s < 1) throw InvalidArgument("s must be positive");
  if (k < 2 || k > 64) throw InvalidArgument("k must lie in [2, 64]");
  // Beyond k(k+1) every anchor is already optimal, so larger s2 add nothing.
  const int top = std::max(s, k * (k + 1));
  std::vector<Anchor> anchors(static_cast<std::size_t>(top) + 1);
  for (int t = 1; t <= top; ++t) anchors[static_cast<std::size_t>(t)] = anchor_at(t, k);

  Anchor best = anchors[static_cast<std::size_t>(s)];
  for (int s1 = 1; s1 < s; ++s1)
    for (int s2 = s + 1; s2 <= top; ++s2) {
      const auto& a1 = anchors[static_cast<std::size_t>(s1)];
      const auto& a2 = anchors[static_cast<std::size_t>(s2)];
      const Rational lambda = (Rational(s2 - s) * a1.lambda + Rational(s - s1) * a2.lambda) / (s2 - s1);
      if (better(lambda, BoundSource::kInterpolated, best)) best = {lambda, BoundSource::kInterpolated};
    }
  ExponentBound out;
  out.s = s;
  out.k = k;
  out.lambda = best.lambda;
  out.eta = best.lambda - main_term(s, k);
  out.source = best.source;
  return out;
}

TheoremTable theorem_table(int k) {
  if (k < 2) throw InvalidArgument("k must be at least 2");
  const std::int64_t K = k;
  TheoremTable t;
  t.k = k;
  t.V_bound = K * K + K + 1;
  t.W_bound = K * K + K - 2;
  t.G_tilde = 2 * K * K + 2 * K - 3;
  t.sigma_inv = 2 * K * (K - 1);
  t.sigma_inv_log = 2 * K * K - 2 * K + 1;
  t.tau_inv = 4 * K * (K - 1);
  t.C_k = 2 * K * (K + 1);
  t.S_k = 2 * K * K + 2 * K - 4;
  return t;
}

namespace {

const std::map<int, std::int64_t>& prior_gtilde() {
  static const std::map<int, std::int64_t> prior{{7, 112},   {8, 224},   {9, 365},   {10, 497},  {11, 627},
                                                 {12, 771},  {13, 934},  {14, 1112}, {15, 1307}, {16, 1517},
                                                 {17, 1747}, {18, 1992}, {19, 2255}, {20, 2534}};
  return prior;
}

}  // namespace

GtildeRow gtilde_comparison(int k) {
  const auto it = prior_gtilde().find(k);
  if (it == prior_gtilde().end()) throw InvalidArgument("comparison available for 7 <= k <= 20");
  return {k, theorem_table(k).G_tilde, it->second};
}

std::vector<GtildeRow> gtilde_comparison() {
  std::vector<GtildeRow> rows;
  for (const auto& [k, prior] : prior_gtilde()) rows.push_back(gtilde_comparison(k));
  return rows;
}

std::vector<HuaRow> hua_comparison() {
  const std::int64_t C_hua[] = {16, 46, 110};
  const std::int64_t S_hua[] = {10, 32, 86};
  std::vector<HuaRow> rows;
  for (int k = 3; k <= 5; ++k) {
    const auto t = theorem_table(k);
    rows.push_back({k, t.C_k, C_hua[k - 3], t.S_k, S_hua[k - 3]});
  }
  return rows;
}

std::string to_decimal(const Rational& r, int digits) {
  BigInt scale = ipow(BigInt(10), static_cast<unsigned>(digits));
  BigInt num = boost::multiprecision::numerator(r) * scale;
  const BigInt den = boost::multiprecision::denominator(r);
  const bool negative = num < 0;
  if (negative) num = -num;
  BigInt q = num / den;
  if ((num % den) * 2 >= den) ++q;  // round half away from zero
  std::string digits_str = q.str();
  if (digits > 0) {
    if (static_cast<int>(digits_str.size()) <= digits)
      digits_str.insert(0, static_cast<std::size_t>(digits + 1) - digits_str.size(), '0');
    digits_str.insert(digits_str.size() - static_cast<std::size_t>(digits), ".");
  }
  return (negative && q != 0 ? "-" : "") + digits_str;
}

}  // namespace vinolab
