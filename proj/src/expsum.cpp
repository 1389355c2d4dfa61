#include "vinolab/expsum.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>
#include <variant>

#include "cells.hpp"
#include "quadrature.hpp"

namespace vinolab {

namespace {

using detail::u128;

constexpr long double kTwoPi = 2 * std::numbers::pi_v<long double>;

std::complex<long double> unit(long double phase) { return {std::cos(kTwoPi * phase), std::sin(kTwoPi * phase)}; }

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

u128 wrap(std::int64_t v) { return static_cast<u128>(static_cast<__int128>(v)); }

/// Phase of sum_j alpha_j x^j modulo 1 for doubles alpha_j = m_j 2^{-L_j}.
/// All terms are brought to the common denominator 2^L and summed exactly.
class DyadicPhase {
 public:
  DyadicPhase(const std::vector<double>& alpha, const ExponentSet& e) : exps_(e.values()) {
    if (alpha.size() != e.size()) throw InvalidArgument("coefficient count differs from exponent set");
    std::vector<std::int64_t> mant(alpha.size());
    std::vector<int> bits(alpha.size(), 0);
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      if (!std::isfinite(alpha[j])) throw InvalidArgument("coefficients must be finite");
      if (alpha[j] == 0) continue;
      int ex = 0;
      const double f = std::frexp(alpha[j], &ex);
      std::int64_t m = static_cast<std::int64_t>(std::ldexp(f, 53));
      int e2 = ex - 53;
      while (m % 2 == 0) {
        m /= 2;
        ++e2;
      }
      if (e2 >= 0) continue;  // integer coefficient: phase 0
      mant[j] = m;
      bits[j] = -e2;
    }
    bits_ = 0;
    for (int b : bits) bits_ = std::max(bits_, b);
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      if (bits[j] == 0) {
        small_.push_back(0);
        big_.emplace_back(0);
        continue;
      }
      const int shift = bits_ - bits[j];
      small_.push_back(shift < 128 ? wrap(mant[j]) << shift : 0);
      big_.push_back(BigInt(mant[j]) << shift);
    }
  }

  long double operator()(std::int64_t x) const {
    if (bits_ == 0) return 0;
    if (bits_ <= 128) {
      u128 acc = 0, pw = 1;
      const u128 xx = wrap(x);
      int have = 0;
      for (std::size_t j = 0; j < exps_.size(); ++j) {
        for (; have < exps_[j]; ++have) pw *= xx;
        acc += small_[j] * pw;
      }
      if (bits_ < 128) acc &= (u128{1} << bits_) - 1;
      return std::ldexp(static_cast<long double>(acc), -bits_);
    }
    const BigInt mod = BigInt(1) << bits_;
    BigInt acc = 0;
    for (std::size_t j = 0; j < exps_.size(); ++j) acc += big_[j] * ipow(BigInt(x), static_cast<unsigned>(exps_[j]));
    acc %= mod;
    if (acc < 0) acc += mod;
    // keep the top 64 bits before converting
    const int drop = bits_ - 64;
    return std::ldexp(static_cast<long double>(acc >> drop), -64);
  }

 private:
  std::vector<int> exps_;
  int bits_ = 0;
  std::vector<u128> small_;
  std::vector<BigInt> big_;
};

/// Phase of sum_j (n_j / d_j) x^j modulo 1 over the common denominator Q.
class RationalPhase {
 public:
  RationalPhase(const std::vector<Rational>& alpha, const ExponentSet& e) : exps_(e.values()) {
    if (alpha.size() != e.size()) throw InvalidArgument("coefficient count differs from exponent set");
    BigInt q = 1;
    for (const auto& a : alpha) q = boost::multiprecision::lcm(q, BigInt(denominator(a)));
    q_big_ = q;
    for (const auto& a : alpha) {
      BigInt n = numerator(a) * (q / denominator(a));
      n %= q;
      if (n < 0) n += q;
      num_big_.push_back(n);
    }
    small_ = q < (BigInt(1) << 62);
    if (small_) {
      q_ = static_cast<std::uint64_t>(q);
      for (const auto& n : num_big_) num_.push_back(static_cast<std::uint64_t>(n));
    }
  }

  long double operator()(std::int64_t x) const {
    if (small_) {
      const u128 xm = static_cast<u128>(x % static_cast<std::int64_t>(q_) + static_cast<std::int64_t>(q_)) % q_;
      u128 acc = 0, pw = 1;
      int have = 0;
      for (std::size_t j = 0; j < exps_.size(); ++j) {
        for (; have < exps_[j]; ++have) pw = pw * xm % q_;
        acc = (acc + num_[j] * pw) % q_;
      }
      return static_cast<long double>(static_cast<std::uint64_t>(acc)) / static_cast<long double>(q_);
    }
    BigInt acc = 0;
    for (std::size_t j = 0; j < exps_.size(); ++j) acc += num_big_[j] * ipow(BigInt(x), static_cast<unsigned>(exps_[j]));
    acc %= q_big_;
    if (acc < 0) acc += q_big_;
    return static_cast<long double>(acc) / static_cast<long double>(q_big_);
  }

 private:
  std::vector<int> exps_;
  bool small_ = true;
  std::uint64_t q_ = 1;
  std::vector<std::uint64_t> num_;
  BigInt q_big_;
  std::vector<BigInt> num_big_;
};

template <class Phase>
Complex progression_sum(const Phase& phase, std::int64_t first, std::int64_t step, std::int64_t last) {
  std::complex<long double> acc = 0;
  for (std::int64_t x = first; x <= last; x += step) acc += unit(phase(x));
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

std::int64_t checked_prime_power(std::int64_t p, int c) {
  if (!is_prime(p)) throw InvalidArgument("p must be prime");
  if (c < 0) throw InvalidArgument("c must be nonnegative");
  std::int64_t m = 1;
  for (int i = 0; i < c; ++i) {
    if (m > (std::int64_t{1} << 62) / p) throw InvalidArgument("p^c too large");
    m *= p;
  }
  return m;
}

template <class Phase>
Complex restricted(const Phase& phase, std::int64_t X, std::int64_t p, int c, std::int64_t xi) {
  const std::int64_t m = checked_prime_power(p, c);
  if (xi < 1 || xi > m) throw InvalidArgument("xi must satisfy 1 <= xi <= p^c");
  return progression_sum(phase, xi, m, X);
}

void check_length(std::int64_t X) {
  if (X < 0) throw InvalidArgument("X must be nonnegative");
}

}  // namespace

void RationalPoint::validate() const {
  if (q < 1) throw InvalidArgument("q must be positive");
  std::int64_t g = q;
  for (auto v : a) {
    if (v < 1 || v > q) throw InvalidArgument("numerators must satisfy 1 <= a_j <= q");
    g = std::gcd(g, v);
  }
  if (g != 1) throw InvalidArgument("gcd(q, a) must be 1");
}

Complex weyl_sum(const std::vector<double>& alpha, std::int64_t X, const ExponentSet& exponents) {
  check_length(X);
  return progression_sum(DyadicPhase(alpha, exponents), 1, 1, X);
}

Complex weyl_sum(const std::vector<Rational>& alpha, std::int64_t X, const ExponentSet& exponents) {
  check_length(X);
  return progression_sum(RationalPhase(alpha, exponents), 1, 1, X);
}

Complex restricted_weyl_sum(const std::vector<double>& alpha, std::int64_t X, const ExponentSet& exponents,
                            std::int64_t p, int c, std::int64_t xi) {
  check_length(X);
  return restricted(DyadicPhase(alpha, exponents), X, p, c, xi);
}

Complex restricted_weyl_sum(const std::vector<Rational>& alpha, std::int64_t X, const ExponentSet& exponents,
                            std::int64_t p, int c, std::int64_t xi) {
  check_length(X);
  return restricted(RationalPhase(alpha, exponents), X, p, c, xi);
}

Complex complete_sum(const RationalPoint& point, const ExponentSet& exponents) {
  if (point.q < 1) throw InvalidArgument("q must be positive");
  if (point.a.size() != exponents.size()) throw InvalidArgument("numerator count differs from exponent set");
  std::vector<Rational> alpha;
  for (auto v : point.a) alpha.emplace_back(BigInt(v), BigInt(point.q));
  return progression_sum(RationalPhase(alpha, exponents), 1, 1, point.q);
}

Complex oscillatory_integral(const std::vector<double>& beta, const ExponentSet& exponents, double X,
                             std::int64_t panels) {
  if (beta.size() != exponents.size()) throw InvalidArgument("coefficient count differs from exponent set");
  if (!(X > 0) || !std::isfinite(X)) throw InvalidArgument("X must be positive and finite");
  long double freq = 0;
  for (std::size_t j = 0; j < beta.size(); ++j) freq += std::fabs(beta[j]) * std::pow(static_cast<long double>(X), exponents[j]);
  const auto minimum = static_cast<std::int64_t>(std::ceil(8 * (1 + freq)));
  if (minimum > (std::int64_t{1} << 26)) throw NoConvergence("integrand oscillates too fast for quadrature");
  std::int64_t n = std::max({panels, minimum, std::int64_t{1}});

  const auto& gl = detail::gauss_legendre16();
  auto integrate = [&](std::int64_t np) {
    const long double h = static_cast<long double>(X) / np;
    std::complex<long double> acc = 0;
    for (std::int64_t i = 0; i < np; ++i) {
      const long double mid = (i + 0.5L) * h;
      std::complex<long double> panel = 0;
      for (int t = 0; t < detail::GaussLegendre16::kOrder; ++t) {
        const long double g = mid + 0.5L * h * gl.node[t];
        long double phase = 0, pw = 1;
        int have = 0;
        for (std::size_t j = 0; j < beta.size(); ++j) {
          for (; have < exponents[j]; ++have) pw *= g;
          phase += beta[j] * pw;
        }
        panel += static_cast<long double>(gl.weight[t]) * unit(phase - std::floor(phase));
      }
      acc += panel * (0.5L * h);
    }
    return acc;
  };

  std::complex<long double> prev = integrate(n);
  long double diff = 0, scale = 1;
  for (int round = 0; round < 6; ++round) {
    n *= 2;
    const std::complex<long double> next = integrate(n);
    diff = std::abs(next - prev);
    scale = std::max(std::abs(next), 1e-3L * X);
    prev = next;
    if (diff <= 1e-9L * scale) break;
    if (n > (std::int64_t{1} << 26)) break;
  }
  if (diff > 1e-6L * scale) throw NoConvergence("panel doubling changed the integral by more than 1e-6");
  return {static_cast<double>(prev.real()), static_cast<double>(prev.imag())};
}

namespace {

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> f;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      int e = 0;
      while (n % d == 0) {
        n /= d;
        ++e;
      }
      f.emplace_back(d, e);
    }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

/// Ramanujan sum c_N(g) = sum_{d | gcd(g, N)} mu(N/d) d, the trace of zeta_N^g.
class RamanujanSums {
 public:
  explicit RamanujanSums(std::uint64_t n) : n_(n), primes_(factorize(n)) {}

  std::int64_t operator()(std::uint64_t g) const {
    const std::uint64_t d = std::gcd(g, n_);  // gcd(0, N) = N
    // c_N(g) = mu(N/d) phi(N) / phi(N/d)
    const std::uint64_t m = n_ / d;
    std::int64_t mu = 1;
    std::uint64_t phi_n = n_, phi_m = m;
    for (auto [p, e] : primes_) {
      phi_n = phi_n / p * (p - 1);
      if (m % p == 0) {
        phi_m = phi_m / p * (p - 1);
        if ((m / p) % p == 0) return 0;
        mu = -mu;
      }
    }
    return mu * static_cast<std::int64_t>(phi_n / phi_m);
  }

  std::uint64_t phi() const {
    std::uint64_t r = n_;
    for (auto [p, e] : primes_) r = r / p * (p - 1);
    return r;
  }

 private:
  std::uint64_t n_;
  std::vector<std::pair<std::uint64_t, int>> primes_;
};

}  // namespace

Count dft_mean_value(const ExponentSet& exponents, int s, std::int64_t X) {
  if (s < 1 || X < 1) throw InvalidArgument("s and X must be positive");
  std::vector<std::uint64_t> len;
  long double grid = 1;
  for (int j : exponents) {
    const long double l = 2.0L * s * std::pow(static_cast<long double>(X), j) + 1;
    grid *= l;
    if (grid > 1e8L) throw TooLarge("DFT grid exceeds 1e8 points");
    len.push_back(static_cast<std::uint64_t>(l));
  }
  if (std::pow(static_cast<long double>(X), s) > 1e6L) throw TooLarge("more than 1e6 tuples per frequency");

  std::uint64_t n = 1;
  for (auto l : len) n = std::lcm(n, l);
  const std::size_t k = len.size();

  // powers x^j mod L_j, scaled to Z/N
  std::vector<std::vector<std::uint64_t>> scaled_power(k, std::vector<std::uint64_t>(static_cast<std::size_t>(X) + 1));
  for (std::size_t j = 0; j < k; ++j)
    for (std::int64_t x = 1; x <= X; ++x) {
      u128 v = 1;
      for (int r = 0; r < exponents[j]; ++r) v = v * static_cast<u128>(x) % len[j];
      scaled_power[j][static_cast<std::size_t>(x)] = static_cast<std::uint64_t>(v);
    }

  // G[g]: number of (frequency, 2s-tuple) pairs with total phase g/N.
  std::unordered_map<std::uint64_t, std::uint64_t> G;
  std::vector<std::uint64_t> freq(k, 0);
  std::vector<std::uint64_t> phi(static_cast<std::size_t>(X) + 1);
  std::unordered_map<std::uint64_t, std::uint64_t> sums, next;
  while (true) {
    for (std::int64_t x = 1; x <= X; ++x) {
      u128 acc = 0;
      for (std::size_t j = 0; j < k; ++j)
        acc += static_cast<u128>(freq[j] * scaled_power[j][static_cast<std::size_t>(x)] % len[j]) * (n / len[j]);
      phi[static_cast<std::size_t>(x)] = static_cast<std::uint64_t>(acc % n);
    }
    sums.clear();
    sums[0] = 1;
    for (int i = 0; i < s; ++i) {
      next.clear();
      for (const auto& [u, c] : sums)
        for (std::int64_t x = 1; x <= X; ++x) next[(u + phi[static_cast<std::size_t>(x)]) % n] += c;
      sums.swap(next);
    }
    for (const auto& [u, cu] : sums)
      for (const auto& [w, cw] : sums) G[(u + n - w) % n] += cu * cw;

    std::size_t j = 0;
    while (j < k && ++freq[j] == len[j]) freq[j++] = 0;
    if (j == k) break;
  }

  const RamanujanSums trace(n);
  BigInt total = 0;
  for (const auto& [g, c] : G) total += BigInt(c) * trace(g);
  const BigInt phi_n = trace.phi();
  BigInt grid_size = 1;
  for (auto l : len) grid_size *= l;
  if (total % phi_n != 0) throw Error("trace is not divisible by phi(N)");
  const BigInt value = total / phi_n;
  if (value % grid_size != 0) throw Error("grid moment is not divisible by the grid size");
  return value / grid_size;
}

double rational_approximation_gap(const RationalPoint& point, std::int64_t X, const ExponentSet& exponents) {
  if (point.q < 1 || point.q > X) throw InvalidArgument("q must satisfy 1 <= q <= X");
  std::vector<Rational> alpha;
  for (auto v : point.a) alpha.emplace_back(BigInt(v), BigInt(point.q));
  const Complex f = weyl_sum(alpha, X, exponents);
  const Complex s = complete_sum(point, exponents);
  return std::abs(f - (static_cast<double>(X) / static_cast<double>(point.q)) * s);
}

}  // namespace vinolab
