#pragma once

// Cell arithmetic shared by the table kernels. Narrow unsigned cells report
// overflow instead of wrapping; callers rebuild with the next wider type.

#include <cstdint>
#include <type_traits>

#include "vinolab/common.hpp"

namespace vinolab::detail {

struct CellOverflow {};

using u128 = unsigned __int128;

template <class Cell>
inline constexpr bool kFixedCell =
    std::is_same_v<Cell, std::uint32_t> || std::is_same_v<Cell, std::uint64_t> || std::is_same_v<Cell, u128>;

inline Count from_u128(u128 v) {
  Count hi = static_cast<std::uint64_t>(v >> 64);
  hi <<= 64;
  return hi + static_cast<std::uint64_t>(v);
}

template <class Cell>
inline bool is_zero(const Cell& c) {
  if constexpr (kFixedCell<Cell>)
    return c == 0;
  else
    return c.is_zero();
}

template <class Cell>
inline Count to_count(const Cell& c) {
  if constexpr (std::is_same_v<Cell, u128>)
    return from_u128(c);
  else
    return Count(c);
}

/// dst += src; sets `overflow` on wraparound.
template <class Dst, class Src>
inline void add_into(Dst& dst, const Src& src, bool& overflow) {
  if constexpr (kFixedCell<Dst>) {
    static_assert(kFixedCell<Src> && sizeof(Src) <= sizeof(Dst));
    const Dst r = dst + static_cast<Dst>(src);
    overflow |= r < static_cast<Dst>(src);
    dst = r;
  } else {
    dst += to_count(src);
  }
}

/// dst += a * b.
template <class Dst, class Src>
inline void add_product(Dst& dst, const Src& a, const Src& b, bool& overflow) {
  if constexpr (kFixedCell<Dst>) {
    Dst p;
    overflow |= __builtin_mul_overflow(static_cast<Dst>(a), static_cast<Dst>(b), &p);
    const Dst r = dst + p;
    overflow |= r < p;
    dst = r;
  } else {
    dst += to_count(a) * to_count(b);
  }
}

/// Exact sum of products / squares. Fixed-width terms are summed in 128 bits
/// and flushed into an arbitrary-precision total before they could wrap.
class Accumulator {
 public:
  template <class Cell>
  void add_product(const Cell& a, const Cell& b) {
    if constexpr (kFixedCell<Cell> && sizeof(Cell) <= 8) {
      add_fast(static_cast<u128>(a) * static_cast<u128>(b));
    } else {
      total_ += to_count(a) * to_count(b);
    }
  }

  template <class Cell>
  void add_square(const Cell& a) {
    if constexpr (kFixedCell<Cell>) {
      if (static_cast<u128>(a) >> 64 == 0) {
        add_fast(static_cast<u128>(a) * static_cast<u128>(a));
        return;
      }
    }
    const Count c = to_count(a);
    total_ += c * c;
  }

  void add(const Count& c) { total_ += c; }

  Count value() const { return total_ + from_u128(fast_); }

 private:
  void add_fast(u128 p) {
    const u128 r = fast_ + p;
    if (r < p) {
      total_ += from_u128(fast_);
      fast_ = p;
    } else {
      fast_ = r;
    }
  }

  u128 fast_ = 0;
  Count total_ = 0;
};

}  // namespace vinolab::detail
