#include <gtest/gtest.h>

#include <array>
#include <map>

#include "generators.hpp"
#include "vinolab/counting.hpp"

using namespace vinolab;
using vinolab::testing::Gen;

namespace {

// Test-side oracle: enumerate s-tuples and tally their power sums.
std::map<std::vector<long long>, long long> naive_table(const ExponentSet& e, int s, Interval iv) {
  std::map<std::vector<long long>, long long> t;
  std::vector<long long> x(static_cast<std::size_t>(s), iv.start);
  while (true) {
    std::vector<long long> key(e.size(), 0);
    for (auto v : x)
      for (std::size_t i = 0; i < e.size(); ++i) {
        long long p = 1;
        for (int r = 0; r < e[i]; ++r) p *= v;
        key[i] += p;
      }
    ++t[key];
    std::size_t d = 0;
    while (d < x.size() && x[d] == iv.last()) x[d++] = iv.start;
    if (d == x.size()) break;
    ++x[d];
  }
  return t;
}

Count naive_mean_value(const ExponentSet& e, int s, Interval iv) {
  Count j = 0;
  for (const auto& [k, c] : naive_table(e, s, iv)) j += Count(c) * c;
  return j;
}

PowerSumVector psv(std::initializer_list<long long> v) {
  PowerSumVector p;
  for (auto x : v) p.components.emplace_back(x);
  return p;
}

}  // namespace

TEST(ExponentSet, ValidatesAndSorts) {
  EXPECT_EQ(ExponentSet({3, 1, 2}).values(), (std::vector<int>{1, 2, 3}));
  EXPECT_THROW(ExponentSet(std::vector<int>{}), InvalidArgument);
  EXPECT_THROW(ExponentSet({1, 1}), InvalidArgument);
  EXPECT_THROW(ExponentSet({0, 2}), InvalidArgument);
  EXPECT_THROW(ExponentSet({33}), InvalidArgument);
  EXPECT_EQ(ExponentSet::full_without(3, 2).values(), (std::vector<int>{1, 3}));
}

TEST(PowerSums, Examples) {
  EXPECT_EQ(power_sums(2, ExponentSet({1, 2, 3})), psv({2, 4, 8}));
  EXPECT_EQ(power_sums(1, ExponentSet({1, 2, 3})), psv({1, 1, 1}));
  EXPECT_EQ(power_sums(3, ExponentSet({2}), std::vector<std::int64_t>{-1}), psv({-9}));
  EXPECT_EQ(power_sums(std::int64_t{1} << 31, ExponentSet({2})).components[0], BigInt(1) << 62);
}

TEST(RepTable, Examples) {
  const auto single = build_rep_table(uniform_spec(ExponentSet({1, 2}), 1, {1, 3}));
  EXPECT_EQ(single.entries, (std::map<PowerSumVector, Count>{{psv({1, 1}), 1}, {psv({2, 4}), 1}, {psv({3, 9}), 1}}));
  const auto linear = build_rep_table(uniform_spec(ExponentSet({1}), 2, {1, 2}));
  EXPECT_EQ(linear.entries, (std::map<PowerSumVector, Count>{{psv({2}), 1}, {psv({3}), 2}, {psv({4}), 1}}));
  const auto quad = build_rep_table(uniform_spec(ExponentSet({1, 2}), 2, {1, 2}));
  EXPECT_EQ(quad.entries, (std::map<PowerSumVector, Count>{{psv({2, 2}), 1}, {psv({3, 5}), 2}, {psv({4, 8}), 1}}));
}

TEST(RepTable, InfeasibleBlockIsEmpty) {
  SystemSpec spec = uniform_spec(ExponentSet({1}), 3, {1, 5});
  spec.blocks[0].distinct_mod = 2;
  EXPECT_EQ(build_rep_table(spec).support_size(), 0u);
  EXPECT_EQ(constrained_count(spec), 0);
  EXPECT_EQ(brute_force_count(spec), 0);
}

TEST(MeanValue, Examples) {
  EXPECT_EQ(mean_value(ExponentSet({1, 2}), 1, {1, 5}), 5);
  EXPECT_EQ(mean_value(ExponentSet({1, 2}), 2, {1, 5}), 45);
  EXPECT_EQ(mean_value(ExponentSet({2}), 2, {1, 3}), 15);
}

TEST(MeanValue, MatchesTestOracleAcrossPaths) {
  Gen g(101);
  for (int trial = 0; trial < 40; ++trial) {
    const ExponentSet e = g.exponent_set(4, 3);
    const int s = static_cast<int>(g.integer(1, 3));
    const Interval iv = g.interval(-6, 10, s == 3 ? 7 : 12);
    const Count want = naive_mean_value(e, s, iv);
    for (auto path : {TablePath::kAuto, TablePath::kSparse, TablePath::kDense}) {
      EngineOptions opt;
      opt.path = path;
      opt.threads = static_cast<unsigned>(g.integer(1, 4));
      try {
        EXPECT_EQ(mean_value(e, s, iv, opt), want) << "trial " << trial;
      } catch (const BudgetExceeded&) {
        // A forced dense box over high powers may legitimately not fit.
        EXPECT_EQ(path, TablePath::kDense);
      }
    }
  }
}

TEST(MeanValue, NormalizedVinogradovMatchesRaw) {
  for (int k = 1; k <= 3; ++k)
    for (int s = 1; s <= 3; ++s)
      for (std::int64_t X : {1, 2, 5, 8, 11})
        EXPECT_EQ(vinogradov_mean_value(k, s, X), mean_value(ExponentSet::full(k), s, {1, X}))
            << k << " " << s << " " << X;
}

TEST(MeanValue, SymmetricDensePathMatchesSparse) {
  EngineOptions dense, sparse;
  dense.path = TablePath::kDense;
  sparse.path = TablePath::kSparse;
  for (int k = 1; k <= 3; ++k)
    for (int s = 2; s <= 4; ++s)
      for (std::int64_t X : {4, 7, 10})
        EXPECT_EQ(vinogradov_mean_value(k, s, X, dense), mean_value(ExponentSet::full(k), s, {1, X}, sparse))
            << k << " " << s << " " << X;
  for (const auto& e : {std::vector<int>{2, 3}, std::vector<int>{1, 3}, std::vector<int>{3}, std::vector<int>{2, 5}})
    for (int s = 2; s <= 3; ++s)
      EXPECT_EQ(mean_value(ExponentSet(e), s, {-6, 13}, dense), mean_value(ExponentSet(e), s, {-6, 13}, sparse));
}

TEST(MeanValue, KnownValuesDegreeTwo) {
  // J_{2,2}(X) = 2X^2 - X: solutions are the permutations.
  for (std::int64_t X = 1; X <= 30; ++X) EXPECT_EQ(vinogradov_mean_value(2, 2, X), 2 * X * X - X);
}

TEST(MeanValue, BudgetExceeded) {
  EngineOptions opt;
  opt.budget_bytes = 1000;
  EXPECT_THROW(mean_value(ExponentSet({1, 2, 3}), 3, {1, 200}, opt), BudgetExceeded);
}

TEST(MeanValue, CellPromotionBeyond32Bits) {
  // r_6 of E={1} on [1, 60] has entries above 2^32.
  EngineOptions dense;
  dense.path = TablePath::kDense;
  EngineOptions sparse;
  sparse.path = TablePath::kSparse;
  EXPECT_EQ(mean_value(ExponentSet({1}), 6, {1, 60}, dense), mean_value(ExponentSet({1}), 6, {1, 60}, sparse));
  EXPECT_EQ(mean_value(ExponentSet({1}), 12, {1, 40}, dense), mean_value(ExponentSet({1}), 12, {1, 40}, sparse));
}

TEST(ConstrainedCount, DiagonalSystemExample) {
  SystemSpec spec;
  spec.exponents = ExponentSet({1});
  VariableBlock a;
  a.interval = {-3, 7};
  VariableBlock b = a;
  b.coefficients = std::vector<std::int64_t>{-1};
  spec.blocks = {a, b};
  EXPECT_EQ(constrained_count(spec), 7);
  EXPECT_EQ(brute_force_count(spec), 7);
}

TEST(ConstrainedCount, OddResidueExample) {
  SystemSpec spec = paired_spec(ExponentSet({1, 2}), 2, {1, 6});
  for (auto& b : spec.blocks) b.residue = ResidueClass{2, 1};
  EXPECT_EQ(constrained_count(spec), 15);
  EXPECT_EQ(brute_force_count(spec), 15);
}

TEST(ConstrainedCount, DistinctPairsExample) {
  SystemSpec spec = paired_spec(ExponentSet({1, 2}), 2, {1, 5});
  for (auto& b : spec.blocks) b.distinct_mod = 5;
  // Distinct pairs with equal sum and square sum are the same set: 20 ordered
  // pairs, each matched by itself and its swap.
  EXPECT_EQ(brute_force_count(spec), 40);
  EXPECT_EQ(constrained_count(spec), 40);
}

TEST(ConstrainedCount, OracleEquivalenceOnRandomSpecs) {
  Gen g(202);
  for (int trial = 0; trial < 300; ++trial) {
    const SystemSpec spec = g.small_spec(2e5L);
    EngineOptions opt;
    opt.threads = static_cast<unsigned>(g.integer(1, 3));
    opt.path = std::array{TablePath::kAuto, TablePath::kSparse, TablePath::kDense}[g.integer(0, 2)];
    EXPECT_EQ(constrained_count(spec, opt), brute_force_count(spec)) << "trial " << trial;
  }
}

TEST(BruteForce, Examples) {
  EXPECT_EQ(brute_force_count(paired_spec(ExponentSet({1, 2}), 2, {1, 3})), 15);
  EXPECT_EQ(brute_force_count(paired_spec(ExponentSet({1}), 1, {1, 4})), 4);
  EXPECT_THROW(brute_force_count(paired_spec(ExponentSet({1}), 4, {1, 100})), TooLarge);
}

TEST(DifferenceCount, Examples) {
  EXPECT_EQ(difference_count(2, 1, {1, 2}, 1, 0), 2);
  EXPECT_EQ(difference_count(2, 1, {1, 2}, 1, 1), 0);
}

TEST(DifferenceCount, SumsToReducedMeanValue) {
  for (int j = 1; j <= 2; ++j) {
    Count total = 0;
    for (std::int64_t h = -20; h <= 20; ++h) total += difference_count(2, 2, {1, 3}, j, h);
    EXPECT_EQ(total, mean_value(ExponentSet::full_without(2, j), 2, {1, 3}));
  }
  Count total = 0;
  for (std::int64_t h = -60; h <= 60; ++h) total += difference_count(3, 2, {1, 3}, 2, h);
  EXPECT_EQ(total, mean_value(ExponentSet({1, 3}), 2, {1, 3}));
}

TEST(LowerBounds, Examples) {
  const auto a = lower_bounds(ExponentSet({1, 2}), 2, {1, 5});
  EXPECT_EQ(a.diagonal, 25);
  const auto b = lower_bounds(ExponentSet({1, 2}), 2, {1, 2});
  EXPECT_EQ(b.support_size, 3u);
  EXPECT_EQ(b.cauchy_schwarz, Rational(16, 3));
  EXPECT_LE(b.cauchy_schwarz, Rational(6));
  EXPECT_EQ(lower_bounds(ExponentSet({1}), 1, {1, 9}).diagonal, mean_value(ExponentSet({1}), 1, {1, 9}));
}

TEST(Properties, TranslationInvariance) {
  Gen g(303);
  for (int trial = 0; trial < 40; ++trial) {
    const ExponentSet e = ExponentSet::full(static_cast<int>(g.integer(1, 3)));
    const int s = static_cast<int>(g.integer(1, 3));
    const std::int64_t n = g.integer(1, 8);
    const Count base = mean_value(e, s, {1, n});
    for (int rep = 0; rep < 3; ++rep) EXPECT_EQ(mean_value(e, s, {g.integer(-5, 50), n}), base);
  }
}

TEST(Properties, DilationInvariance) {
  Gen g(404);
  for (int trial = 0; trial < 30; ++trial) {
    const ExponentSet e = ExponentSet::full(static_cast<int>(g.integer(1, 3)));
    const int s = static_cast<int>(g.integer(1, 2));
    const std::int64_t m = g.integer(2, 4), c = g.integer(0, m - 1), X = g.integer(1, 20);
    SystemSpec spec = paired_spec(e, s, {1, X});
    for (auto& b : spec.blocks) b.residue = ResidueClass{m, c};
    const auto n = static_cast<std::int64_t>(spec.blocks[0].admissible_values().size());
    const Count want = n == 0 ? Count(0) : mean_value(e, s, {1, n});
    EXPECT_EQ(constrained_count(spec), want);
  }
}

TEST(Properties, Monotonicity) {
  Gen g(505);
  for (int trial = 0; trial < 30; ++trial) {
    const ExponentSet e = g.exponent_set(3, 2);
    std::vector<int> sup = e.values();
    for (int j = 1; j <= 4; ++j)
      if (!e.contains(j) && g.coin()) sup.push_back(j);
    const ExponentSet bigger(sup);
    ASSERT_TRUE(bigger.is_superset_of(e));
    const int s = static_cast<int>(g.integer(1, 3));
    const Interval iv = g.interval(-3, 5, 7);
    EXPECT_LE(mean_value(bigger, s, iv), mean_value(e, s, iv));
    EXPECT_LE(mean_value(e, s, iv), mean_value(e, s, {iv.start, iv.length + 1}));
  }
}

TEST(Properties, MassConservationAndLowerBounds) {
  Gen g(606);
  for (int trial = 0; trial < 60; ++trial) {
    SystemSpec spec = g.small_spec(1e5L);
    spec.target.reset();
    EXPECT_EQ(build_rep_table(spec).total(), admissible_assignments(spec)) << trial;
  }
  for (int trial = 0; trial < 30; ++trial) {
    const ExponentSet e = g.exponent_set(3, 3);
    const int s = static_cast<int>(g.integer(1, 3));
    const Interval iv = g.interval(-3, 5, 7);
    const Count j = mean_value(e, s, iv);
    const auto lb = lower_bounds(e, s, iv);
    EXPECT_GE(j, lb.diagonal);
    EXPECT_GE(j * lb.support_size, ipow(Count(iv.length), static_cast<unsigned>(2 * s)));
  }
}

TEST(Properties, Marginalization) {
  for (int k = 1; k <= 3; ++k)
    for (int s = 1; s <= 3; ++s) {
      const auto high = build_rep_table(uniform_spec(ExponentSet::full(k + 1), s, {1, 6}));
      const auto low = build_rep_table(uniform_spec(ExponentSet::full(k), s, {1, 6}));
      EXPECT_EQ(marginalize_last(high).entries, low.entries);
    }
}

TEST(Properties, DeterministicUnderParallelism) {
  const ExponentSet e = ExponentSet::full(2);
  EngineOptions one;
  const Count want = mean_value(e, 3, {1, 40}, one);
  for (unsigned t : {2u, 3u, 8u}) {
    EngineOptions opt;
    opt.threads = t;
    EXPECT_EQ(mean_value(e, 3, {1, 40}, opt), want);
    SystemSpec spec = paired_spec(e, 3, {1, 25});
    EXPECT_EQ(constrained_count(spec, opt), constrained_count(spec, one));
  }
}
