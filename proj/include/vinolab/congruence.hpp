#pragma once

// Exhaustive checks of the congruence machinery: well-conditioned tuples,
// solution sets of power-sum congruences to prime-power moduli, and the
// unique lifting of solutions that are distinct modulo p.

#include <cstdint>
#include <map>
#include <vector>

#include "vinolab/common.hpp"

namespace vinolab {

/// Parameters of the system sum_i sigma_i (z_i - eta)^j = m_j (mod p^{jb}),
/// 1 <= j <= k, over z in [1, p^{kb}]^k with z_i = xi (mod p^a) pairwise
/// distinct modulo p^{a+1}.
struct PrimeParams {
  std::int64_t p = 2;
  int k = 1;
  int a = 0;
  int b = 1;
  std::int64_t xi = 1;
  std::int64_t eta = 1;
  std::vector<int> sigma;  // +1 / -1, length k

  /// Throws InvalidArgument on a non-prime p, b <= a, a < 0, xi outside
  /// [1, p^a], eta outside [1, p^b] or a malformed sigma.
  void validate() const;
};

/// All k-tuples in [1, p^{c+1}]^k congruent to xi mod p^c and pairwise
/// distinct mod p^{c+1}, in lexicographic order. Empty when k > p.
std::vector<Tuple> well_conditioned_tuples(std::int64_t p, int c, std::int64_t xi, int k);

/// Solutions z of the system above for the target m (m_j read mod p^{jb}),
/// in lexicographic order. Throws TooLarge if p^{kb} > 300 or k > 3.
std::vector<Tuple> bset_solutions(const PrimeParams& params, const Tuple& m);

/// Number of admissible z per target (m_j mod p^{jb}), for every target hit.
std::map<Tuple, std::uint64_t> bset_histogram(const PrimeParams& params);

struct CongruenceMax {
  Count max_card = 0;
  Count bound = 0;
  bool pass = false;
  /// A maximizing choice.
  std::vector<int> sigma;
  std::int64_t xi = 0;
  std::int64_t eta = 0;
  Tuple target;
};

/// Maximum solution-set size over all targets m, all eta in [1, p^b], all
/// sign vectors and all xi in [1, p^a], against k! p^{k(k-1)(a+b)/2}.
CongruenceMax bset_max(std::int64_t p, int k, int a, int b);

/// Maximum over sign vectors and targets v of the number of y in
/// [1, p^{kb-a}]^k pairwise distinct mod p with sum_i sigma_i y_i^j = v_j
/// (mod p^{kb-a}) for 1 <= j <= k; the bound is k!.
CongruenceMax distinct_residue_max(std::int64_t p, int k, int a, int b);

/// For a base tuple distinct mod p (p > k), checks that the lifts
/// x = base (mod p), x in [1, p^k]^k, map one-to-one onto the targets
/// n (mod p^k) with n_j = sum_i (base_i - xi)^j (mod p), where the target of
/// x is (sum_i (x_i - xi)^j mod p^k)_j. Throws InvalidArgument when the
/// base is not distinct mod p or p <= k.
bool lift_count_check(std::int64_t p, int k, const Tuple& base, std::int64_t xi = 0);

}  // namespace vinolab
