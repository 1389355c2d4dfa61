#include "vinolab/circle.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "cells.hpp"
#include "quadrature.hpp"

namespace vinolab {

namespace {

using CL = std::complex<long double>;

constexpr long double kTwoPi = 2 * std::numbers::pi_v<long double>;

/// e(t / q) for t = 0..q-1.
std::vector<CL> roots_of_unity(std::int64_t q) {
  std::vector<CL> r(static_cast<std::size_t>(q));
  for (std::int64_t t = 0; t < q; ++t) {
    const long double a = kTwoPi * static_cast<long double>(t) / static_cast<long double>(q);
    r[static_cast<std::size_t>(t)] = {std::cos(a), std::sin(a)};
  }
  return r;
}

std::int64_t pow_mod(std::int64_t x, int e, std::int64_t q) {
  std::int64_t r = 1 % q;
  for (int i = 0; i < e; ++i) r = r * x % q;
  return r;
}

CL int_power(CL z, int e) {
  CL r = 1;
  for (int i = 0; i < e; ++i) r *= z;
  return r;
}

}  // namespace

double singular_series_term(int s, int k, std::int64_t q) {
  if (s < 1 || k < 1) throw InvalidArgument("s and k must be positive");
  if (q < 1) throw InvalidArgument("q must be positive");
  if (k > 3) throw TooLarge("complete sums over all a need k <= 3");
  const auto roots = roots_of_unity(q);
  const auto ku = static_cast<std::size_t>(k);
  std::vector<std::vector<std::int64_t>> pw(static_cast<std::size_t>(q) + 1, std::vector<std::int64_t>(ku));
  for (std::int64_t r = 1; r <= q; ++r)
    for (std::size_t j = 0; j < ku; ++j) pw[static_cast<std::size_t>(r)][j] = pow_mod(r % q, static_cast<int>(j + 1), q);

  long double total = 0;
  std::vector<std::int64_t> a(ku, 1);
  while (true) {
    std::int64_t g = q;
    for (auto v : a) g = std::gcd(g, v);
    if (g == 1) {
      CL S = 0;
      for (std::int64_t r = 1; r <= q; ++r) {
        std::int64_t t = 0;
        for (std::size_t j = 0; j < ku; ++j) t += a[j] * pw[static_cast<std::size_t>(r)][j] % q;
        S += roots[static_cast<std::size_t>(t % q)];
      }
      const long double mod2 = std::norm(S) / (static_cast<long double>(q) * q);
      total += std::pow(mod2, s);
    }
    std::size_t d = 0;
    while (d < ku && a[d] == q) a[d++] = 1;
    if (d == ku) break;
    ++a[d];
  }
  return static_cast<double>(total);
}

SeriesTruncation singular_series(int s, int k, std::int64_t Q) {
  if (Q < 1 || Q > 200) throw TooLarge("singular series cutoff must satisfy 1 <= Q <= 200");
  if (k > 3) throw TooLarge("complete sums over all a need k <= 3");
  long double work = 0;
  for (std::int64_t q = 1; q <= Q; ++q) work += std::pow(static_cast<long double>(q), k + 1);
  if (work > 5e9L) throw TooLarge("singular series truncation too expensive");
  SeriesTruncation out;
  out.Q = Q;
  long double sum = 0;
  for (std::int64_t q = 1; q <= Q; ++q) {
    out.terms.push_back(singular_series_term(s, k, q));
    sum += out.terms.back();
  }
  out.value = static_cast<double>(sum);
  return out;
}

IntegralTruncation singular_integral(int s, int k, double box, std::int64_t grid) {
  if (s < 1 || k < 1) throw InvalidArgument("s and k must be positive");
  if (!(k == 1 || 2 * s > k * (k + 1) / 2 + k))
    throw InvalidArgument("singular integral needs 2s > k(k+1)/2 + k (or k = 1)");
  if (!(box > 0) || !std::isfinite(box)) throw InvalidArgument("box must be positive");
  if (grid == 0) grid = s + 1;
  if (grid <= s) throw InvalidArgument("grid must exceed s points per unit length");

  // Composite Gauss-Legendre nodes on [0, 1], fine enough for the largest
  // phase derivative sum_j j box on the box.
  const auto& gl = detail::gauss_legendre16();
  const auto panels = static_cast<std::int64_t>(std::ceil(1.25 * box * k * (k + 1) / 2)) + 16;
  std::vector<long double> t, w;
  for (std::int64_t p = 0; p < panels; ++p)
    for (int i = 0; i < detail::GaussLegendre16::kOrder; ++i) {
      t.push_back((p + 0.5L + 0.5L * gl.node[i]) / panels);
      w.push_back(0.5L * gl.weight[i] / panels);
    }
  const std::size_t nodes = t.size();
  const long double work = static_cast<long double>(nodes) * std::pow(2.0L * box * 2 * grid + 1, k) / 2;
  if (work > 2e11L) throw TooLarge("singular integral grid too large");

  auto evaluate = [&](std::int64_t n, double* tail) {
    const long double h = 1.0L / n;
    const auto M = static_cast<std::int64_t>(std::floor(box * n));
    const std::size_t rest = static_cast<std::size_t>(k - 1);
    std::vector<std::int64_t> m(rest, -M);
    std::vector<long double> re(nodes), im(nodes), rot_re(nodes), rot_im(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
      rot_re[i] = std::cos(kTwoPi * h * t[i]);
      rot_im[i] = std::sin(kTwoPi * h * t[i]);
    }
    long double total = 0, shell = 0;
    const long double edge = 0.9L * box;
    while (true) {
      // Use the symmetry beta -> -beta: keep (m_2..m_k) with first nonzero
      // entry positive (weight 2) or all zero (weight 1).
      int weight = 0;
      {
        std::size_t j = 0;
        while (j < rest && m[j] == 0) ++j;
        weight = (j == rest) ? 1 : (m[j] > 0 ? 2 : 0);
      }
      if (weight > 0) {
        bool outer_rest = false;
        for (auto v : m) outer_rest |= std::fabs(static_cast<long double>(v) * h) > edge;
        auto reset = [&](std::int64_t m1) {
          for (std::size_t i = 0; i < nodes; ++i) {
            long double phase = static_cast<long double>(m1) * h * t[i];
            long double p = t[i];
            for (std::size_t j = 0; j < rest; ++j) {
              p *= t[i];
              phase += static_cast<long double>(m[j]) * h * p;
            }
            phase -= std::floor(phase);
            re[i] = std::cos(kTwoPi * phase);
            im[i] = std::sin(kTwoPi * phase);
          }
        };
        for (std::int64_t m1 = -M; m1 <= M; ++m1) {
          if ((m1 + M) % 256 == 0) reset(m1);
          long double sr = 0, si = 0;
          for (std::size_t i = 0; i < nodes; ++i) {
            sr += w[i] * re[i];
            si += w[i] * im[i];
          }
          const long double f = weight * std::pow(sr * sr + si * si, s);
          total += f;
          if (outer_rest || std::fabs(static_cast<long double>(m1) * h) > edge) shell += f;
          for (std::size_t i = 0; i < nodes; ++i) {
            const long double r = re[i] * rot_re[i] - im[i] * rot_im[i];
            im[i] = re[i] * rot_im[i] + im[i] * rot_re[i];
            re[i] = r;
          }
        }
      }
      std::size_t d = 0;
      while (d < rest && m[d] == M) m[d++] = -M;
      if (d == rest) break;
      ++m[d];
    }
    const long double cell = std::pow(h, k);
    if (tail) *tail = static_cast<double>(shell * cell);
    return static_cast<double>(total * cell);
  };

  IntegralTruncation out;
  out.box = box;
  out.coarse_value = evaluate(grid, nullptr);
  out.grid = 2 * grid;
  out.value = evaluate(out.grid, &out.tail);
  if (std::fabs(out.value - out.coarse_value) > 1e-3 * std::fabs(out.value))
    throw NoConvergence("singular integral changed by more than 1e-3 under grid doubling");
  return out;
}

namespace {

/// Incremental convolution of the k-th power indicator, s times, on [0, n].
template <class Cell>
std::vector<Cell> waring_table(int s, int k, std::int64_t n) {
  std::vector<std::int64_t> powers;
  for (std::int64_t x = 1;; ++x) {
    long double v = std::pow(static_cast<long double>(x), k);
    if (v > n) break;
    std::int64_t p = 1;
    for (int i = 0; i < k; ++i) p *= x;
    powers.push_back(p);
  }
  const auto size = static_cast<std::size_t>(n) + 1;
  std::vector<Cell> cur(size, Cell{0}), next(size, Cell{0});
  for (auto p : powers) cur[static_cast<std::size_t>(p)] = Cell{1};
  for (int step = 2; step <= s; ++step) {
    bool overflow = false;
    for (std::size_t m = 0; m < size; ++m) {
      Cell acc{0};
      for (auto p : powers) {
        if (static_cast<std::size_t>(p) > m) break;
        detail::add_into(acc, cur[m - static_cast<std::size_t>(p)], overflow);
      }
      next[m] = acc;
    }
    if (overflow) throw detail::CellOverflow{};
    cur.swap(next);
  }
  return cur;
}

}  // namespace

std::vector<Count> waring_counts(int s, int k, const std::vector<std::int64_t>& ns) {
  if (s < 1 || k < 1) throw InvalidArgument("s and k must be positive");
  std::int64_t n_max = 0;
  for (auto n : ns) {
    if (n < 0) throw InvalidArgument("n must be nonnegative");
    n_max = std::max(n_max, n);
  }
  if (static_cast<long double>(s) * n_max > 1e8L) throw TooLarge("s n exceeds 1e8");
  std::vector<Count> out;
  try {
    const auto t = waring_table<detail::u128>(s, k, n_max);
    for (auto n : ns) out.push_back(detail::to_count(t[static_cast<std::size_t>(n)]));
  } catch (const detail::CellOverflow&) {
    out.clear();
    const auto t = waring_table<Count>(s, k, n_max);
    for (auto n : ns) out.push_back(t[static_cast<std::size_t>(n)]);
  }
  return out;
}

Count waring_count(int s, int k, std::int64_t n) { return waring_counts(s, k, {n}).front(); }

Complex waring_series_term(int s, int k, std::int64_t n, std::int64_t q) {
  if (s < 1 || k < 1 || q < 1) throw InvalidArgument("s, k and q must be positive");
  const auto roots = roots_of_unity(q);
  std::vector<std::int64_t> rk(static_cast<std::size_t>(q));
  for (std::int64_t r = 0; r < q; ++r) rk[static_cast<std::size_t>(r)] = pow_mod(r, k, q);
  const std::int64_t nq = ((n % q) + q) % q;
  CL total = 0;
  for (std::int64_t a = 1; a <= q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    CL S = 0;
    for (std::int64_t r = 0; r < q; ++r) S += roots[static_cast<std::size_t>(a % q * rk[static_cast<std::size_t>(r)] % q)];
    const std::int64_t phase = (q - a % q * nq % q) % q;
    total += int_power(S / static_cast<long double>(q), s) * roots[static_cast<std::size_t>(phase)];
  }
  return {static_cast<double>(total.real()), static_cast<double>(total.imag())};
}

SeriesValue waring_singular_series(int s, int k, std::int64_t n, std::int64_t Q) {
  if (Q < 1 || Q > 500) throw InvalidArgument("series cutoff must satisfy 1 <= Q <= 500");
  long double re = 0, im = 0;
  for (std::int64_t q = 1; q <= Q; ++q) {
    const Complex term = waring_series_term(s, k, n, q);
    re += term.real();
    im += term.imag();
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

double waring_gamma_factor(int s, int k, std::int64_t n) {
  if (s <= k) throw InvalidArgument("main term needs s > k");
  const long double g = std::pow(std::tgamma(1.0L + 1.0L / k), s) / std::tgamma(static_cast<long double>(s) / k);
  return static_cast<double>(g * std::pow(static_cast<long double>(n), static_cast<long double>(s) / k - 1));
}

double waring_main_term(int s, int k, std::int64_t n, std::int64_t Q) {
  return waring_gamma_factor(s, k, n) * waring_singular_series(s, k, n, Q).real;
}

double asymptotic_ratio(int k, int s, std::int64_t X, const Count& J) {
  const int e = 2 * s - k * (k + 1) / 2;
  Rational r(J);
  if (e >= 0)
    r /= ipow(BigInt(X), static_cast<unsigned>(e));
  else
    r *= ipow(BigInt(X), static_cast<unsigned>(-e));
  return static_cast<double>(r);
}

double asymptotic_ratio(int k, int s, std::int64_t X, const EngineOptions& options) {
  return asymptotic_ratio(k, s, X, vinogradov_mean_value(k, s, X, options));
}

}  // namespace vinolab
