#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "vinolab/common.hpp"

namespace vinolab::detail {

using Key = std::vector<std::int64_t>;

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ k.size();
    for (auto v : k) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdull;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }
};

/// Hash map from power-sum keys to counts.
struct SparseTable {
  std::size_t dims = 0;
  std::unordered_map<Key, Count, KeyHash> cells;

  /// The table of the empty assignment: {0 -> 1}.
  static SparseTable unit(std::size_t dims) {
    SparseTable t;
    t.dims = dims;
    t.cells.emplace(Key(dims, 0), Count(1));
    return t;
  }

  static SparseTable from_points(std::size_t dims, const std::vector<Key>& points) {
    SparseTable t;
    t.dims = dims;
    for (const auto& p : points) t.cells[p] += 1;
    return t;
  }

  Count at(const Key& k) const {
    auto it = cells.find(k);
    return it == cells.end() ? Count(0) : it->second;
  }
};

inline SparseTable convolve(const SparseTable& a, const SparseTable& b) {
  SparseTable out;
  out.dims = a.dims;
  out.cells.reserve(a.cells.size() + b.cells.size());
  Key k(a.dims);
  for (const auto& [ka, ca] : a.cells)
    for (const auto& [kb, cb] : b.cells) {
      for (std::size_t j = 0; j < a.dims; ++j) k[j] = ka[j] + kb[j];
      out.cells[k] += ca * cb;
    }
  return out;
}

inline SparseTable scaled(SparseTable t, const Count& factor) {
  for (auto& [k, c] : t.cells) c *= factor;
  return t;
}

inline void accumulate(SparseTable& into, const SparseTable& from) {
  for (const auto& [k, c] : from.cells) into.cells[k] += c;
}

/// sum_v a(v) * b(target - v)
inline Count join(const SparseTable& a, const SparseTable& b, const Key& target) {
  Count total = 0;
  Key need(a.dims);
  for (const auto& [ka, ca] : a.cells) {
    for (std::size_t j = 0; j < a.dims; ++j) need[j] = target[j] - ka[j];
    auto it = b.cells.find(need);
    if (it != b.cells.end()) total += ca * it->second;
  }
  return total;
}

inline Count square_sum(const SparseTable& a) {
  Count total = 0;
  for (const auto& [k, c] : a.cells) total += c * c;
  return total;
}

}  // namespace vinolab::detail
