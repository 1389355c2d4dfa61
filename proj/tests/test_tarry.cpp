#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "generators.hpp"
#include "vinolab/tarry.hpp"

using namespace vinolab;

namespace {

BigInt psum(const Tuple& t, int j) {
  BigInt s = 0;
  for (auto x : t) s += ipow(BigInt(x), static_cast<unsigned>(j));
  return s;
}

/// Exhaustive oracle: every pair of nondecreasing s-tuples on [1, X] that
/// agree in degrees 1..k and differ in degree k+1.
std::set<std::pair<Tuple, Tuple>> naive_pairs(int k, int s, std::int64_t X) {
  std::vector<Tuple> all;
  Tuple cur(static_cast<std::size_t>(s), 1);
  while (true) {
    all.push_back(cur);
    int i = s - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == X) --i;
    if (i < 0) break;
    const auto v = cur[static_cast<std::size_t>(i)] + 1;
    for (int j = i; j < s; ++j) cur[static_cast<std::size_t>(j)] = v;
  }
  std::set<std::pair<Tuple, Tuple>> out;
  for (const auto& a : all)
    for (const auto& b : all) {
      if (!(a < b)) continue;
      bool same = true;
      for (int j = 1; j <= k && same; ++j) same = psum(a, j) == psum(b, j);
      if (same && psum(a, k + 1) != psum(b, k + 1)) out.insert({a, b});
    }
  return out;
}

bool group_contains(const std::vector<MultigradeGroup>& groups, const Tuple& a, const Tuple& b, int k) {
  for (const auto& g : groups) {
    bool match = true;
    for (int j = 1; j <= k; ++j) match = match && g.common_power_sums.components[static_cast<std::size_t>(j - 1)] == psum(a, j);
    if (!match) continue;
    const auto& t = g.top_sums;
    if (std::find(t.begin(), t.end(), psum(a, k + 1)) != t.end() &&
        std::find(t.begin(), t.end(), psum(b, k + 1)) != t.end())
      return true;
  }
  return false;
}

}  // namespace

TEST(Multigrade, QuotedClassesArePresent) {
  const auto g1 = multigrade_groups(1, 2, 2, 4);
  EXPECT_TRUE(group_contains(g1, {1, 4}, {2, 3}, 1));
  const auto g2 = multigrade_groups(2, 2, 3, 7);
  EXPECT_TRUE(group_contains(g2, {1, 5, 6}, {2, 3, 7}, 2));
  EXPECT_EQ(psum({1, 5, 6}, 3), 342);
  EXPECT_EQ(psum({2, 3, 7}, 3), 378);
}

TEST(Multigrade, SmallestClassWitness) {
  // Repeated entries are allowed, so the smallest class is {1,3}/{2,2}.
  const auto w = multigrade_search(1, 2, 2, 4);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->tuples, (std::vector<Tuple>{{1, 3}, {2, 2}}));
  EXPECT_TRUE(verify_witness(*w));
  const auto w2 = multigrade_search(2, 2, 3, 7);
  ASSERT_TRUE(w2);
  EXPECT_EQ(w2->tuples, (std::vector<Tuple>{{1, 4, 4}, {2, 2, 5}}));
}

TEST(Multigrade, SingleVariableHasNoWitness) {
  for (std::int64_t X : {1, 5, 50}) EXPECT_FALSE(multigrade_search(2, 2, 1, X));
}

TEST(Multigrade, MinimalSizeForDegreeTwo) {
  EXPECT_FALSE(multigrade_search(2, 2, 2, 30));
  const auto w = multigrade_search(2, 2, 3, 7);
  ASSERT_TRUE(w);
  EXPECT_LE(w->s, 2 * 2 + 2 - 2);
}

TEST(Multigrade, MatchesExhaustiveOracle) {
  for (int k = 1; k <= 2; ++k)
    for (int s = 2; s <= 3; ++s)
      for (std::int64_t X = 2; X <= 7; ++X) {
        const auto pairs = naive_pairs(k, s, X);
        const auto groups = multigrade_groups(k, 2, s, X);
        for (const auto& [a, b] : pairs) EXPECT_TRUE(group_contains(groups, a, b, k));
        std::size_t classes = 0;
        std::set<std::vector<BigInt>> heads;
        for (const auto& [a, b] : pairs) {
          std::vector<BigInt> h;
          for (int j = 1; j <= k; ++j) h.push_back(psum(a, j));
          heads.insert(h);
        }
        classes = heads.size();
        EXPECT_EQ(groups.size(), classes) << k << " " << s << " " << X;
        EXPECT_EQ(multigrade_search(k, 2, s, X).has_value(), !pairs.empty());
      }
}

TEST(Multigrade, MonotoneInRange) {
  for (int s = 2; s <= 3; ++s) {
    bool seen = false;
    for (std::int64_t X = 1; X <= 12; ++X) {
      const bool found = multigrade_search(2, 2, s, X).has_value();
      if (seen) EXPECT_TRUE(found) << s << " " << X;
      seen = seen || found;
    }
  }
}

TEST(Multigrade, TamperedWitnessRejected) {
  auto w = *multigrade_search(2, 2, 3, 7);
  EXPECT_TRUE(verify_witness(w));
  w.tuples[1][0] += 1;
  EXPECT_FALSE(verify_witness(w));
}

TEST(Multigrade, RejectsLargeSearch) { EXPECT_THROW(multigrade_groups(2, 2, 4, 200), TooLarge); }

TEST(TarryCriterion, Examples) {
  const auto c = tarry_criterion(1, 2, 2, 4);
  EXPECT_EQ(c.J_k, 44);
  EXPECT_EQ(c.J_k1, 28);
  EXPECT_FALSE(c.holds);
  EXPECT_FALSE(c.witness);
}

TEST(TarryCriterion, SmallestHoldingRange) {
  EXPECT_EQ(smallest_criterion_X(1, 2, 2, 20), 6);
}

TEST(TarryCriterion, CountsMatchMeanValue) {
  for (int k = 1; k <= 2; ++k)
    for (int s = 1; s <= 3; ++s)
      for (std::int64_t X : {3, 6}) {
        const auto c = tarry_criterion(k, 1, s, X);
        EXPECT_EQ(c.J_k, mean_value(ExponentSet::full(k), s, {1, X}));
        EXPECT_EQ(c.J_k1, mean_value(ExponentSet::full(k + 1), s, {1, X}));
      }
}

TEST(TarryCriterion, ExtractionWheneverHolds) {
  for (int k = 1; k <= 2; ++k)
    for (int t = 1; t <= 3; ++t)
      for (int s = 2; s <= 3; ++s)
        for (std::int64_t X = 1; X <= 10; ++X) {
          const auto c = tarry_criterion(k, t, s, X);
          EXPECT_EQ(c.holds, c.J_k > t * c.J_k1);
          if (c.holds) {
            ASSERT_TRUE(c.witness);
            EXPECT_TRUE(verify_witness(*c.witness));
            EXPECT_EQ(c.witness->h, t);
          }
        }
}
