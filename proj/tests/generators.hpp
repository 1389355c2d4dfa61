#pragma once

// Seeded generators for property tests. Every test draws from its own fixed
// seed so failures reproduce.

#include <cstdint>
#include <random>
#include <vector>

#include "vinolab/counting.hpp"

namespace vinolab::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  bool coin() { return integer(0, 1) == 1; }

  /// Random nonempty subset of {1..max_exp} with at most max_size elements.
  ExponentSet exponent_set(int max_exp, int max_size) {
    std::vector<int> all;
    for (int j = 1; j <= max_exp; ++j) all.push_back(j);
    std::shuffle(all.begin(), all.end(), rng_);
    const auto n = static_cast<std::size_t>(integer(1, std::min<int>(max_size, max_exp)));
    return ExponentSet(std::vector<int>(all.begin(), all.begin() + static_cast<long>(n)));
  }

  Interval interval(std::int64_t lo, std::int64_t hi, std::int64_t max_len) {
    return {integer(lo, hi), integer(1, max_len)};
  }

  /// Small random system whose brute-force enumeration stays below `max_tuples`.
  SystemSpec small_spec(long double max_tuples, std::int64_t max_len = 6) {
    while (true) {
      SystemSpec spec;
      spec.exponents = exponent_set(3, 3);
      const int nblocks = static_cast<int>(integer(1, 3));
      long double tuples = 1;
      for (int b = 0; b < nblocks; ++b) {
        VariableBlock blk;
        blk.count = static_cast<int>(integer(1, 3));
        blk.interval = interval(-4, 6, max_len);
        blk.sign = coin() ? 1 : -1;
        if (integer(0, 3) == 0) {
          const std::int64_t m = integer(2, 3);
          blk.residue = ResidueClass{m, integer(0, m - 1)};
        }
        if (integer(0, 3) == 0) blk.distinct_mod = integer(1, 4);
        if (integer(0, 4) == 0) {
          std::vector<std::int64_t> c;
          for (std::size_t i = 0; i < spec.exponents.size(); ++i) c.push_back(integer(-2, 2) == 0 ? 1 : integer(-2, 2));
          blk.coefficients = c;
        }
        for (int i = 0; i < blk.count; ++i) tuples *= static_cast<long double>(blk.interval.length);
        spec.blocks.push_back(blk);
      }
      if (tuples > max_tuples) continue;
      if (coin()) {
        PowerSumVector t;
        for (std::size_t i = 0; i < spec.exponents.size(); ++i) t.components.emplace_back(integer(-3, 3));
        spec.target = t;
      }
      return spec;
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace vinolab::testing
