#include "vinolab/congruence.hpp"

#include <algorithm>
#include <cmath>

namespace vinolab {

namespace {

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::int64_t power(std::int64_t base, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (std::int64_t{1} << 62) / std::max<std::int64_t>(base, 1)) throw TooLarge("prime power exceeds 2^62");
    r *= base;
  }
  return r;
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t pow_mod(std::int64_t x, int e, std::int64_t m) {
  std::int64_t r = 1 % m;
  x = mod(x, m);
  for (int i = 0; i < e; ++i) r = static_cast<std::int64_t>(static_cast<__int128>(r) * x % m);
  return r;
}

Count factorial(int k) {
  Count f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

std::vector<std::vector<int>> all_signs(int k) {
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << k); ++mask) {
    std::vector<int> s(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) s[static_cast<std::size_t>(i)] = (mask >> i & 1) ? -1 : 1;
    out.push_back(std::move(s));
  }
  return out;
}

/// Calls visit(tuple) for every k-tuple over `values` whose entries are
/// pairwise distinct modulo `distinct`, in lexicographic order.
template <class Visit>
void for_each_distinct_tuple(const std::vector<std::int64_t>& values, int k, std::int64_t distinct, Visit&& visit) {
  const std::size_t n = values.size();
  if (n == 0 || k < 1) return;
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  Tuple t(static_cast<std::size_t>(k));
  std::size_t depth = 0;
  while (true) {
    if (idx[depth] == n) {
      if (depth == 0) return;
      idx[depth] = 0;
      --depth;
      ++idx[depth];
      continue;
    }
    const std::int64_t v = values[idx[depth]];
    bool ok = true;
    for (std::size_t e = 0; e < depth && ok; ++e) ok = mod(t[e] - v, distinct) != 0;
    if (!ok) {
      ++idx[depth];
      continue;
    }
    t[depth] = v;
    if (depth + 1 == static_cast<std::size_t>(k)) {
      visit(static_cast<const Tuple&>(t));
      ++idx[depth];
    } else {
      ++depth;
    }
  }
}

/// Mixed-radix histogram of power-sum targets: coordinate j lives mod
/// moduli[j].
class TargetHistogram {
 public:
  explicit TargetHistogram(std::vector<std::int64_t> moduli) : moduli_(std::move(moduli)) {
    std::size_t size = 1;
    for (auto m : moduli_) {
      if (static_cast<long double>(size) * m > 1e8L) throw TooLarge("target space exceeds 1e8 cells");
      size *= static_cast<std::size_t>(m);
    }
    counts_.assign(size, 0);
  }

  void reset() { std::fill(counts_.begin(), counts_.end(), 0); }

  std::size_t index(const Tuple& target) const {
    std::size_t i = 0;
    for (std::size_t j = 0; j < moduli_.size(); ++j)
      i = i * static_cast<std::size_t>(moduli_[j]) + static_cast<std::size_t>(target[j]);
    return i;
  }

  Tuple target(std::size_t i) const {
    Tuple t(moduli_.size());
    for (std::size_t j = moduli_.size(); j-- > 0;) {
      t[j] = static_cast<std::int64_t>(i % static_cast<std::size_t>(moduli_[j]));
      i /= static_cast<std::size_t>(moduli_[j]);
    }
    return t;
  }

  void add(const Tuple& target) { ++counts_[index(target)]; }

  std::pair<std::uint64_t, std::size_t> max() const {
    auto it = std::max_element(counts_.begin(), counts_.end());
    return {*it, static_cast<std::size_t>(it - counts_.begin())};
  }

  const std::vector<std::uint64_t>& counts() const { return counts_; }

 private:
  std::vector<std::int64_t> moduli_;
  std::vector<std::uint64_t> counts_;
};

/// Shared enumeration of the system: calls visit(z, target) for every
/// admissible z.
template <class Visit>
void enumerate_bset(const PrimeParams& prm, Visit&& visit) {
  prm.validate();
  if (prm.k > 3) throw TooLarge("exhaustive congruence checks need k <= 3");
  const std::int64_t top = power(prm.p, prm.k * prm.b);
  if (top > 300) throw TooLarge("p^{kb} exceeds 300");
  const std::int64_t pa = power(prm.p, prm.a);
  const std::int64_t pa1 = pa * prm.p;
  std::vector<std::int64_t> values;
  for (std::int64_t z = 1; z <= top; ++z)
    if (mod(z - prm.xi, pa) == 0) values.push_back(z);
  const auto k = static_cast<std::size_t>(prm.k);
  std::vector<std::int64_t> moduli(k);
  for (std::size_t j = 0; j < k; ++j) moduli[j] = power(prm.p, static_cast<int>(j + 1) * prm.b);
  // (z - eta)^j mod p^{jb} per admissible value
  std::vector<std::vector<std::int64_t>> pw(values.size(), std::vector<std::int64_t>(k));
  for (std::size_t v = 0; v < values.size(); ++v)
    for (std::size_t j = 0; j < k; ++j) pw[v][j] = pow_mod(values[v] - prm.eta, static_cast<int>(j + 1), moduli[j]);
  std::vector<std::size_t> position(static_cast<std::size_t>(top) + 1);
  for (std::size_t v = 0; v < values.size(); ++v) position[static_cast<std::size_t>(values[v])] = v;

  Tuple target(k);
  for_each_distinct_tuple(values, prm.k, pa1, [&](const Tuple& z) {
    for (std::size_t j = 0; j < k; ++j) {
      std::int64_t acc = 0;
      for (std::size_t i = 0; i < k; ++i) acc += prm.sigma[i] * pw[position[static_cast<std::size_t>(z[i])]][j];
      target[j] = mod(acc, moduli[j]);
    }
    visit(z, static_cast<const Tuple&>(target));
  });
}

std::vector<std::int64_t> bset_moduli(std::int64_t p, int k, int b) {
  std::vector<std::int64_t> m;
  for (int j = 1; j <= k; ++j) m.push_back(power(p, j * b));
  return m;
}

}  // namespace

void PrimeParams::validate() const {
  if (!is_prime(p)) throw InvalidArgument("p must be prime");
  if (k < 1) throw InvalidArgument("k must be positive");
  if (a < 0 || b <= a) throw InvalidArgument("need 0 <= a < b");
  if (xi < 1 || xi > power(p, a)) throw InvalidArgument("xi must lie in [1, p^a]");
  if (eta < 1 || eta > power(p, b)) throw InvalidArgument("eta must lie in [1, p^b]");
  if (sigma.size() != static_cast<std::size_t>(k)) throw InvalidArgument("sigma must have length k");
  for (int s : sigma)
    if (s != 1 && s != -1) throw InvalidArgument("sigma entries must be +1 or -1");
}

std::vector<Tuple> well_conditioned_tuples(std::int64_t p, int c, std::int64_t xi, int k) {
  if (!is_prime(p)) throw InvalidArgument("p must be prime");
  if (c < 0 || k < 1) throw InvalidArgument("need c >= 0 and k >= 1");
  const std::int64_t pc = power(p, c);
  if (xi < 1 || xi > pc) throw InvalidArgument("xi must lie in [1, p^c]");
  std::vector<Tuple> out;
  if (k > p) return out;
  std::vector<std::int64_t> values;
  for (std::int64_t v = 1; v <= pc * p; ++v)
    if (mod(v - xi, pc) == 0) values.push_back(v);
  for_each_distinct_tuple(values, k, pc * p, [&](const Tuple& t) { out.push_back(t); });
  return out;
}

std::vector<Tuple> bset_solutions(const PrimeParams& params, const Tuple& m) {
  if (m.size() != static_cast<std::size_t>(params.k)) throw InvalidArgument("target must have length k");
  const auto moduli = bset_moduli(params.p, params.k, params.b);
  Tuple want(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) want[j] = mod(m[j], moduli[j]);
  std::vector<Tuple> out;
  enumerate_bset(params, [&](const Tuple& z, const Tuple& target) {
    if (target == want) out.push_back(z);
  });
  return out;
}

std::map<Tuple, std::uint64_t> bset_histogram(const PrimeParams& params) {
  TargetHistogram h(bset_moduli(params.p, params.k, params.b));
  enumerate_bset(params, [&](const Tuple&, const Tuple& target) { h.add(target); });
  std::map<Tuple, std::uint64_t> out;
  for (std::size_t i = 0; i < h.counts().size(); ++i)
    if (h.counts()[i] != 0) out.emplace(h.target(i), h.counts()[i]);
  return out;
}

CongruenceMax bset_max(std::int64_t p, int k, int a, int b) {
  CongruenceMax best;
  best.bound = factorial(k) * ipow(BigInt(p), static_cast<unsigned>(k * (k - 1) * (a + b) / 2));
  TargetHistogram h(bset_moduli(p, k, b));
  const std::int64_t pa = power(p, a), pb = power(p, b);
  std::uint64_t top = 0;
  bool first = true;
  for (const auto& sigma : all_signs(k))
    for (std::int64_t xi = 1; xi <= pa; ++xi)
      for (std::int64_t eta = 1; eta <= pb; ++eta) {
        PrimeParams prm{p, k, a, b, xi, eta, sigma};
        h.reset();
        enumerate_bset(prm, [&](const Tuple&, const Tuple& target) { h.add(target); });
        const auto [count, at] = h.max();
        if (first || count > top) {
          first = false;
          top = count;
          best.sigma = sigma;
          best.xi = xi;
          best.eta = eta;
          best.target = h.target(at);
        }
      }
  best.max_card = top;
  best.pass = best.max_card <= best.bound;
  return best;
}

CongruenceMax distinct_residue_max(std::int64_t p, int k, int a, int b) {
  if (!is_prime(p)) throw InvalidArgument("p must be prime");
  if (k < 1 || a < 0 || b <= a) throw InvalidArgument("need k >= 1 and 0 <= a < b");
  if (k > 3) throw TooLarge("exhaustive congruence checks need k <= 3");
  const std::int64_t top = power(p, k * b - a);
  if (top > 300) throw TooLarge("p^{kb-a} exceeds 300");
  const auto ku = static_cast<std::size_t>(k);
  CongruenceMax best;
  best.bound = factorial(k);
  TargetHistogram h(std::vector<std::int64_t>(ku, top));
  std::vector<std::int64_t> values;
  for (std::int64_t y = 1; y <= top; ++y) values.push_back(y);
  std::vector<std::vector<std::int64_t>> pw(values.size() + 1, std::vector<std::int64_t>(ku));
  for (std::int64_t y = 1; y <= top; ++y)
    for (std::size_t j = 0; j < ku; ++j) pw[static_cast<std::size_t>(y)][j] = pow_mod(y, static_cast<int>(j + 1), top);
  std::uint64_t most = 0;
  bool first = true;
  Tuple target(ku);
  for (const auto& sigma : all_signs(k)) {
    h.reset();
    for_each_distinct_tuple(values, k, p, [&](const Tuple& y) {
      for (std::size_t j = 0; j < ku; ++j) {
        std::int64_t acc = 0;
        for (std::size_t i = 0; i < ku; ++i) acc += sigma[i] * pw[static_cast<std::size_t>(y[i])][j];
        target[j] = mod(acc, top);
      }
      h.add(target);
    });
    const auto [count, at] = h.max();
    if (first || count > most) {
      first = false;
      most = count;
      best.sigma = sigma;
      best.target = h.target(at);
    }
  }
  best.max_card = most;
  best.pass = best.max_card <= best.bound;
  return best;
}

bool lift_count_check(std::int64_t p, int k, const Tuple& base, std::int64_t xi) {
  if (!is_prime(p)) throw InvalidArgument("p must be prime");
  if (k < 1 || p <= k) throw InvalidArgument("lifting needs p > k");
  if (base.size() != static_cast<std::size_t>(k)) throw InvalidArgument("base must have length k");
  for (std::size_t i = 0; i < base.size(); ++i)
    for (std::size_t j = i + 1; j < base.size(); ++j)
      if (mod(base[i] - base[j], p) == 0) throw InvalidArgument("base entries must be distinct mod p");
  const std::int64_t top = power(p, k);
  const std::int64_t lifts_per_variable = top / p;
  const long double total = std::pow(static_cast<long double>(lifts_per_variable), k);
  if (total > 1e8L) throw TooLarge("more than 1e8 lifts to enumerate");

  const auto ku = static_cast<std::size_t>(k);
  std::map<Tuple, std::uint64_t> hits;
  std::vector<std::int64_t> step(ku, 0);  // x_i = base_i mod p + p * step_i
  Tuple target(ku);
  while (true) {
    for (std::size_t j = 0; j < ku; ++j) {
      std::int64_t acc = 0;
      for (std::size_t i = 0; i < ku; ++i) {
        const std::int64_t x = mod(base[i] - 1, p) + 1 + p * step[i];
        acc = mod(acc + pow_mod(x - xi, static_cast<int>(j + 1), top), top);
      }
      target[j] = acc;
    }
    ++hits[target];
    std::size_t d = 0;
    while (d < ku && ++step[d] == lifts_per_variable) step[d++] = 0;
    if (d == ku) break;
  }
  // Every compatible target is hit exactly once iff the map is injective and
  // its image has the size of the compatible target set, p^{k(k-1)}.
  for (const auto& [t, c] : hits)
    if (c != 1) return false;
  return static_cast<long double>(hits.size()) == total;
}

}  // namespace vinolab
