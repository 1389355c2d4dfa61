#include <gtest/gtest.h>

#include <set>

#include "generators.hpp"
#include "vinolab/congruence.hpp"

using namespace vinolab;

namespace {

std::int64_t ipow64(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::int64_t md(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

// Test-side oracle: literal transcription of the solution-set definition.
std::vector<Tuple> naive_bset(const PrimeParams& prm, const Tuple& m) {
  const std::int64_t top = ipow64(prm.p, prm.k * prm.b);
  const std::int64_t pa = ipow64(prm.p, prm.a);
  const auto xis = well_conditioned_tuples(prm.p, prm.a, prm.xi, prm.k);
  const std::set<Tuple> patterns(xis.begin(), xis.end());
  std::vector<Tuple> out;
  Tuple z(static_cast<std::size_t>(prm.k), 1);
  while (true) {
    Tuple pattern;
    for (auto v : z) pattern.push_back(md(v - 1, pa * prm.p) + 1);
    if (patterns.count(pattern)) {
      bool ok = true;
      for (int j = 1; j <= prm.k && ok; ++j) {
        const std::int64_t mj = ipow64(prm.p, j * prm.b);
        std::int64_t acc = 0;
        for (int i = 0; i < prm.k; ++i) acc += prm.sigma[static_cast<std::size_t>(i)] * md(ipow64(md(z[static_cast<std::size_t>(i)] - prm.eta, mj), j), mj);
        ok = md(acc - m[static_cast<std::size_t>(j - 1)], mj) == 0;
      }
      if (ok) out.push_back(z);
    }
    std::size_t d = z.size();
    while (d > 0 && z[d - 1] == top) z[--d] = 1;
    if (d == 0) break;
    ++z[d - 1];
  }
  return out;
}

}  // namespace

TEST(WellConditioned, Examples) {
  EXPECT_EQ(well_conditioned_tuples(3, 0, 1, 2).size(), 6u);
  const auto t = well_conditioned_tuples(3, 1, 2, 2);
  EXPECT_EQ(t.size(), 6u);
  for (const auto& x : t)
    for (auto v : x) EXPECT_EQ(v % 3, 2);
  EXPECT_TRUE(well_conditioned_tuples(2, 0, 1, 3).empty());
}

TEST(WellConditioned, CardinalityIsFallingFactorial) {
  for (std::int64_t p : {2, 3, 5, 7})
    for (int c = 0; c <= 2; ++c)
      for (int k = 1; k <= 3; ++k) {
        std::uint64_t want = 1;
        for (int i = 0; i < k; ++i) want *= static_cast<std::uint64_t>(std::max<std::int64_t>(p - i, 0));
        for (std::int64_t xi = 1; xi <= ipow64(p, c); xi += std::max<std::int64_t>(1, ipow64(p, c) / 3))
          EXPECT_EQ(well_conditioned_tuples(p, c, xi, k).size(), want) << p << " " << c << " " << k;
      }
}

TEST(BSet, LinearHasOneSolution) {
  for (std::int64_t p : {3, 5, 7})
    for (std::int64_t m = 0; m < p; ++m)
      for (std::int64_t eta = 1; eta <= p; ++eta)
        EXPECT_EQ(bset_solutions({p, 1, 0, 1, 1, eta, {1}}, {m}).size(), 1u);
}

TEST(BSet, MatchesLiteralDefinition) {
  vinolab::testing::Gen g(21);
  for (int trial = 0; trial < 30; ++trial) {
    PrimeParams prm;
    prm.p = std::array<std::int64_t, 3>{2, 3, 5}[static_cast<std::size_t>(g.integer(0, 2))];
    prm.k = static_cast<int>(g.integer(1, 2));
    prm.a = static_cast<int>(g.integer(0, 1));
    prm.b = prm.a + 1;
    if (ipow64(prm.p, prm.k * prm.b) > 300) continue;
    prm.xi = g.integer(1, ipow64(prm.p, prm.a));
    prm.eta = g.integer(1, ipow64(prm.p, prm.b));
    for (int i = 0; i < prm.k; ++i) prm.sigma.push_back(g.coin() ? 1 : -1);
    Tuple m;
    for (int j = 1; j <= prm.k; ++j) m.push_back(g.integer(0, ipow64(prm.p, j * prm.b) - 1));
    EXPECT_EQ(bset_solutions(prm, m), naive_bset(prm, m)) << trial;
  }
  const PrimeParams prm{5, 2, 0, 1, 1, 5, {1, -1}};
  EXPECT_EQ(bset_solutions(prm, {0, 0}), naive_bset(prm, {0, 0}));
}

TEST(BSet, PartitionOverTargets) {
  for (const PrimeParams& prm : {PrimeParams{5, 2, 0, 1, 1, 3, {1, -1}}, PrimeParams{3, 2, 1, 2, 2, 4, {1, 1}},
                                 PrimeParams{5, 3, 0, 1, 1, 2, {1, -1, 1}}}) {
    std::uint64_t total = 0;
    for (const auto& [m, c] : bset_histogram(prm)) total += c;
    // admissible z: values = xi mod p^a in [1, p^{kb}], distinct mod p^{a+1}
    const std::int64_t per_class = ipow64(prm.p, prm.k * prm.b - prm.a - 1);
    std::uint64_t want = 1;
    for (int i = 0; i < prm.k; ++i) want *= static_cast<std::uint64_t>((prm.p - i) * per_class);
    EXPECT_EQ(total, want);
  }
}

TEST(BSetMax, Examples) {
  const auto one = bset_max(5, 1, 0, 1);
  EXPECT_EQ(one.max_card, 1);
  EXPECT_EQ(one.bound, 1);
  EXPECT_TRUE(one.pass);
  const auto two = bset_max(5, 2, 0, 1);
  EXPECT_EQ(two.bound, 10);
  EXPECT_TRUE(two.pass);
  const auto seven = bset_max(7, 2, 0, 1);
  EXPECT_EQ(seven.bound, 14);
  EXPECT_TRUE(seven.pass);
  // The maximizer really attains the reported size.
  const PrimeParams at{5, 2, 0, 1, two.xi, two.eta, two.sigma};
  EXPECT_EQ(Count(naive_bset(at, two.target).size()), two.max_card);
}

TEST(BSetMax, HoldsForSmallPrimes) {
  for (std::int64_t p : {5, 7})
    for (int k = 1; k <= 2; ++k) EXPECT_TRUE(bset_max(p, k, 0, 1).pass) << p << " " << k;
}

TEST(DistinctResidueMax, AtMostFactorial) {
  for (auto [k, p] : {std::pair{2, 5}, std::pair{2, 7}, std::pair{1, 5}}) {
    const auto r = distinct_residue_max(p, k, 0, 1);
    EXPECT_TRUE(r.pass) << k << " " << p << " " << r.max_card;
  }
}

TEST(LiftCount, Examples) {
  EXPECT_TRUE(lift_count_check(5, 2, {1, 2}));
  EXPECT_TRUE(lift_count_check(7, 2, {3, 6}));
  EXPECT_THROW(lift_count_check(5, 2, {1, 1}), InvalidArgument);
  EXPECT_THROW(lift_count_check(3, 3, {1, 2, 3}), InvalidArgument);
  EXPECT_TRUE(lift_count_check(5, 3, {1, 2, 4}));
}

TEST(LiftCount, IndependentOfShift) {
  for (std::int64_t xi = 0; xi < 5; ++xi)
    for (const Tuple& base : {Tuple{1, 2}, Tuple{3, 5}, Tuple{4, 2}}) EXPECT_TRUE(lift_count_check(5, 2, base, xi));
}
