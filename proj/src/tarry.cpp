#include "vinolab/tarry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "cells.hpp"

namespace vinolab {

namespace {

using detail::u128;

void check_args(int k, int h, int s, std::int64_t X) {
  if (k < 1 || h < 1 || s < 1 || X < 1) throw InvalidArgument("k, h, s and X must be positive");
  if (std::pow(static_cast<long double>(X), s) > 1e8L) throw TooLarge("X^s exceeds 1e8");
  if (static_cast<long double>(s) * std::pow(static_cast<long double>(X), k + 1) > 1e36L)
    throw TooLarge("power sums exceed the 128-bit search range");
}

RepTable degree_table(int k, int s, std::int64_t X, const EngineOptions& options) {
  return build_rep_table(uniform_spec(ExponentSet::full(k + 1), s, {1, X}), options);
}

/// Classes with at least h distinct top values; table keys are already in
/// lexicographic order, so each class is a contiguous run.
std::vector<MultigradeGroup> groups_of(const RepTable& table, int h) {
  std::vector<MultigradeGroup> out;
  auto it = table.entries.begin();
  while (it != table.entries.end()) {
    const auto head_end = it->first.components.end() - 1;
    MultigradeGroup g;
    g.common_power_sums.components.assign(it->first.components.begin(), head_end);
    for (; it != table.entries.end() &&
           std::equal(g.common_power_sums.components.begin(), g.common_power_sums.components.end(),
                      it->first.components.begin());
         ++it)
      if (!it->second.is_zero()) g.top_sums.push_back(it->first.components.back());
    if (static_cast<int>(g.top_sums.size()) >= h) out.push_back(std::move(g));
  }
  return out;
}

u128 power(std::int64_t x, int e) {
  u128 r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

/// Depth-first walk over nondecreasing tuples in lexicographic order,
/// pruned on the degree-1 sum.
struct RepresentativeSearch {
  int k, h, s;
  std::int64_t X;
  std::vector<u128> target;  // degrees 1..k
  std::map<u128, Tuple> found;
  Tuple cur;
  std::vector<u128> sums;

  void run() {
    cur.clear();
    sums.assign(static_cast<std::size_t>(k) + 1, 0);
    step(1);
  }

  bool done() const { return static_cast<int>(found.size()) >= h; }

  void step(std::int64_t min_value) {
    const int left = s - static_cast<int>(cur.size());
    if (left == 0) {
      for (int j = 0; j < k; ++j)
        if (sums[static_cast<std::size_t>(j)] != target[static_cast<std::size_t>(j)]) return;
      found.try_emplace(sums[static_cast<std::size_t>(k)], cur);
      return;
    }
    for (std::int64_t x = min_value; x <= X && !done(); ++x) {
      const u128 low = sums[0] + static_cast<u128>(x) * left;
      if (low > target[0]) break;
      if (sums[0] + x + static_cast<u128>(X) * (left - 1) < target[0]) continue;
      cur.push_back(x);
      for (int j = 0; j <= k; ++j) sums[static_cast<std::size_t>(j)] += power(x, j + 1);
      step(x);
      for (int j = 0; j <= k; ++j) sums[static_cast<std::size_t>(j)] -= power(x, j + 1);
      cur.pop_back();
    }
  }
};

}  // namespace

bool verify_witness(const MultigradeWitness& w) {
  if (static_cast<int>(w.tuples.size()) != w.h || static_cast<int>(w.top_sums.size()) != w.h) return false;
  if (static_cast<int>(w.common_power_sums.size()) != w.k) return false;
  std::set<BigInt> tops;
  for (std::size_t u = 0; u < w.tuples.size(); ++u) {
    const auto& t = w.tuples[u];
    if (static_cast<int>(t.size()) != w.s || !std::is_sorted(t.begin(), t.end())) return false;
    for (int j = 1; j <= w.k + 1; ++j) {
      BigInt sum = 0;
      for (auto x : t) {
        if (x < 1) return false;
        sum += ipow(BigInt(x), static_cast<unsigned>(j));
      }
      if (j <= w.k && sum != w.common_power_sums.components[static_cast<std::size_t>(j - 1)]) return false;
      if (j == w.k + 1 && sum != w.top_sums[u]) return false;
    }
    tops.insert(w.top_sums[u]);
  }
  return static_cast<int>(tops.size()) == w.h;
}

std::vector<MultigradeGroup> multigrade_groups(int k, int h, int s, std::int64_t X, const EngineOptions& options) {
  check_args(k, h, s, X);
  return groups_of(degree_table(k, s, X, options), h);
}

MultigradeWitness witness_for_group(int k, int h, int s, std::int64_t X, const MultigradeGroup& group) {
  check_args(k, h, s, X);
  RepresentativeSearch search{k, h, s, X, {}, {}, {}, {}};
  for (const auto& c : group.common_power_sums.components) search.target.push_back(static_cast<u128>(c));
  search.run();
  if (!search.done()) throw InvalidArgument("class has fewer than h distinct top sums on [1, X]");
  std::vector<std::pair<Tuple, u128>> reps;
  for (const auto& [top, t] : search.found) reps.emplace_back(t, top);
  std::sort(reps.begin(), reps.end());
  MultigradeWitness w;
  w.k = k;
  w.s = s;
  w.h = h;
  w.common_power_sums = group.common_power_sums;
  for (int u = 0; u < h; ++u) {
    w.tuples.push_back(reps[static_cast<std::size_t>(u)].first);
    w.top_sums.push_back(detail::from_u128(reps[static_cast<std::size_t>(u)].second));
  }
  if (!verify_witness(w)) throw InvalidArgument("witness failed arithmetic re-check");
  return w;
}

std::optional<MultigradeWitness> multigrade_search(int k, int h, int s, std::int64_t X, const EngineOptions& options) {
  const auto groups = multigrade_groups(k, h, s, X, options);
  if (groups.empty()) return std::nullopt;
  return witness_for_group(k, h, s, X, groups.front());
}

TarryCriterion tarry_criterion(int k, int t, int s, std::int64_t X, const EngineOptions& options) {
  if (t < 1) throw InvalidArgument("t must be positive");
  check_args(k, t, s, X);
  const RepTable top = degree_table(k, s, X, options);
  const RepTable low = marginalize_last(top);
  TarryCriterion out;
  out.J_k = 0;
  out.J_k1 = 0;
  for (const auto& [v, c] : low.entries) out.J_k += c * c;
  for (const auto& [v, c] : top.entries) out.J_k1 += c * c;
  out.holds = out.J_k > t * out.J_k1;
  if (out.holds) {
    const auto groups = groups_of(top, t);
    if (groups.empty()) throw InvalidArgument("count inequality holds but no class qualifies");
    out.witness = witness_for_group(k, t, s, X, groups.front());
  }
  return out;
}

std::optional<std::int64_t> smallest_criterion_X(int k, int t, int s, std::int64_t X_max, const EngineOptions& options) {
  for (std::int64_t X = 1; X <= X_max; ++X)
    if (tarry_criterion(k, t, s, X, options).holds) return X;
  return std::nullopt;
}

}  // namespace vinolab
