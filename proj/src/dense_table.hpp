#pragma once

// Row-compressed dense tables. Every coordinate lives on a lattice
// origin + stride * i, 0 <= i < extent. The leading coordinates select a row
// (row-major); each row stores only the trimmed nonzero span of the last
// coordinate. For the quadratic systems the nonzero region is a parabolic
// band, so trimming saves about a third of the bounding box.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <type_traits>
#include <vector>

#include "cells.hpp"
#include "parallel.hpp"
#include "sparse_table.hpp"

namespace vinolab::detail {

struct Lattice {
  std::vector<std::int64_t> origin;
  std::vector<std::int64_t> stride;
  std::vector<std::int64_t> extent;

  std::size_t dims() const { return origin.size(); }

  std::size_t leading_rows() const {
    std::size_t r = 1;
    for (std::size_t j = 0; j + 1 < dims(); ++j) r *= static_cast<std::size_t>(extent[j]);
    return r;
  }

  long double box_cells() const {
    long double c = 1;
    for (auto e : extent) c *= static_cast<long double>(e);
    return c;
  }

  std::size_t linear(const std::int64_t* idx) const {
    std::size_t lin = 0;
    for (std::size_t j = 0; j + 1 < dims(); ++j) lin = lin * static_cast<std::size_t>(extent[j]) + static_cast<std::size_t>(idx[j]);
    return lin;
  }

  void unlinear(std::size_t lin, std::int64_t* idx) const {
    for (std::size_t j = dims() - 1; j-- > 0;) {
      idx[j] = static_cast<std::int64_t>(lin % static_cast<std::size_t>(extent[j]));
      lin /= static_cast<std::size_t>(extent[j]);
    }
  }

  /// Lattice of t-fold sums of values from this lattice.
  Lattice power(int t) const {
    Lattice l = *this;
    for (std::size_t j = 0; j < dims(); ++j) {
      l.origin[j] = origin[j] * t;
      l.extent[j] = (extent[j] - 1) * t + 1;
    }
    return l;
  }

  /// Lattice of sums a + b; strides must agree.
  static Lattice sum(const Lattice& a, const Lattice& b) {
    Lattice l = a;
    for (std::size_t j = 0; j < a.dims(); ++j) {
      l.origin[j] = a.origin[j] + b.origin[j];
      l.extent[j] = a.extent[j] + b.extent[j] - 1;
    }
    return l;
  }

  /// Smallest lattice containing all points.
  static Lattice of_points(std::size_t dims, const std::vector<Key>& points) {
    Lattice l;
    l.origin.assign(dims, 0);
    l.stride.assign(dims, 0);
    l.extent.assign(dims, 1);
    if (points.empty()) {
      l.stride.assign(dims, 1);
      return l;
    }
    for (std::size_t j = 0; j < dims; ++j) {
      std::int64_t lo = points[0][j], hi = points[0][j];
      for (const auto& p : points) {
        lo = std::min(lo, p[j]);
        hi = std::max(hi, p[j]);
      }
      std::int64_t g = 0;
      for (const auto& p : points) g = std::gcd(g, p[j] - lo);
      if (g == 0) g = 1;
      l.origin[j] = lo;
      l.stride[j] = g;
      l.extent[j] = (hi - lo) / g + 1;
    }
    return l;
  }
};

template <class Cell>
struct Row {
  std::int64_t lo = 0;
  std::vector<Cell> cells;

  bool empty() const { return cells.empty(); }
  std::int64_t hi() const { return lo + static_cast<std::int64_t>(cells.size()); }
};

template <class Cell>
struct DenseTable {
  Lattice lattice;
  std::vector<Row<Cell>> rows;

  std::size_t dims() const { return lattice.dims(); }

  std::size_t stored_cells() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.cells.size();
    return n;
  }
};

/// Reflection i -> extent - 1 - i of the flagged coordinates. A table is
/// mirror-symmetric if it is invariant under it; sums of symmetric tables
/// are symmetric on the sum lattice.
struct Mirror {
  std::vector<bool> flip;

  bool active() const { return std::find(flip.begin(), flip.end(), true) != flip.end(); }
  bool last_flipped() const { return flip.back(); }

  std::size_t row(const Lattice& l, std::size_t r, std::int64_t* idx) const {
    l.unlinear(r, idx);
    for (std::size_t j = 0; j + 1 < l.dims(); ++j)
      if (flip[j]) idx[j] = l.extent[j] - 1 - idx[j];
    return l.linear(idx);
  }

  template <class Cell>
  Row<Cell> reflect(const Lattice& l, const Row<Cell>& r) const {
    if (!last_flipped() || r.empty()) return r;
    Row<Cell> out;
    out.lo = l.extent.back() - r.hi();
    out.cells.assign(r.cells.rbegin(), r.cells.rend());
    return out;
  }
};

/// Builds a dense table from a sparse one, on the given lattice (which must
/// contain every key). Throws CellOverflow when a count does not fit Cell.
template <class Cell>
DenseTable<Cell> dense_from_sparse(const SparseTable& s, const Lattice& lat) {
  DenseTable<Cell> t;
  t.lattice = lat;
  t.rows.resize(lat.leading_rows());
  const std::size_t d = lat.dims();
  std::vector<std::int64_t> idx(d);
  std::vector<std::pair<std::int64_t, std::int64_t>> span(t.rows.size(), {INT64_MAX, INT64_MIN});
  for (const auto& [k, c] : s.cells) {
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j < d; ++j) idx[j] = (k[j] - lat.origin[j]) / lat.stride[j];
    auto& sp = span[lat.linear(idx.data())];
    sp.first = std::min(sp.first, idx[d - 1]);
    sp.second = std::max(sp.second, idx[d - 1]);
  }
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    if (span[r].first <= span[r].second) {
      t.rows[r].lo = span[r].first;
      t.rows[r].cells.assign(static_cast<std::size_t>(span[r].second - span[r].first + 1), Cell{});
    }
  for (const auto& [k, c] : s.cells) {
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j < d; ++j) idx[j] = (k[j] - lat.origin[j]) / lat.stride[j];
    auto& row = t.rows[lat.linear(idx.data())];
    if constexpr (kFixedCell<Cell>) {
      if (c > Count(std::numeric_limits<Cell>::max())) throw CellOverflow{};
      row.cells[static_cast<std::size_t>(idx[d - 1] - row.lo)] = static_cast<Cell>(c);
    } else {
      row.cells[static_cast<std::size_t>(idx[d - 1] - row.lo)] = c;
    }
  }
  return t;
}

template <class Cell>
SparseTable dense_to_sparse(const DenseTable<Cell>& t) {
  SparseTable s;
  const std::size_t d = t.dims();
  s.dims = d;
  std::vector<std::int64_t> idx(d);
  Key k(d);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.empty()) continue;
    t.lattice.unlinear(r, idx.data());
    for (std::size_t j = 0; j + 1 < d; ++j) k[j] = t.lattice.origin[j] + t.lattice.stride[j] * idx[j];
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
      if (is_zero(row.cells[i])) continue;
      k[d - 1] = t.lattice.origin[d - 1] + t.lattice.stride[d - 1] * (row.lo + static_cast<std::int64_t>(i));
      s.cells.emplace(k, to_count(row.cells[i]));
    }
  }
  return s;
}

/// Re-expresses a table on a finer lattice whose strides divide the current
/// ones (origins unchanged).
template <class Cell>
DenseTable<Cell> regrid(const DenseTable<Cell>& t, const std::vector<std::int64_t>& stride) {
  if (stride == t.lattice.stride) return t;
  const std::size_t d = t.dims();
  DenseTable<Cell> out;
  out.lattice = t.lattice;
  std::vector<std::int64_t> factor(d);
  for (std::size_t j = 0; j < d; ++j) {
    factor[j] = t.lattice.stride[j] / stride[j];
    out.lattice.stride[j] = stride[j];
    out.lattice.extent[j] = (t.lattice.extent[j] - 1) * factor[j] + 1;
  }
  out.rows.resize(out.lattice.leading_rows());
  std::vector<std::int64_t> idx(d);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.empty()) continue;
    t.lattice.unlinear(r, idx.data());
    for (std::size_t j = 0; j + 1 < d; ++j) idx[j] *= factor[j];
    auto& nrow = out.rows[out.lattice.linear(idx.data())];
    const std::int64_t f = factor[d - 1];
    nrow.lo = row.lo * f;
    nrow.cells.assign(static_cast<std::size_t>((row.cells.size() - 1) * f + 1), Cell{});
    for (std::size_t i = 0; i < row.cells.size(); ++i) nrow.cells[i * f] = row.cells[i];
  }
  return out;
}

namespace kernel {

/// Nonempty rows of b with their leading multi-indices.
template <class Cell>
struct RowList {
  std::vector<std::vector<std::int64_t>> index;
  std::vector<const Row<Cell>*> row;

  explicit RowList(const DenseTable<Cell>& b) {
    std::vector<std::int64_t> idx(b.dims());
    for (std::size_t r = 0; r < b.rows.size(); ++r) {
      if (b.rows[r].empty()) continue;
      b.lattice.unlinear(r, idx.data());
      index.emplace_back(idx.begin(), idx.end() - 1);
      row.push_back(&b.rows[r]);
    }
  }
};

/// One shifted, weighted copy of an a-row that lands in an output row.
template <class Cell>
struct Contribution {
  std::size_t a_row;
  std::size_t out_row;  // local index within the row block
  std::int64_t begin;   // output position of the a-row's first cell
  const Cell* weight;
};

/// Output rows are produced in blocks of kRowBlock and their columns in
/// tiles of kTile cells. Within a tile every a-row segment is loaded once
/// and added into all output rows of the block that use it, so the a-rows
/// are read from memory once per block instead of once per output row.
inline constexpr std::int64_t kTile = 4096;
inline constexpr std::size_t kRowBlock = 16;

template <class Wide, class Cell>
inline void add_segment(Wide* dst, const Cell* src, std::int64_t n, const Cell& w, bool& overflow) {
  if constexpr (kFixedCell<Cell>) {
    if (w == 1) {
      bool of = false;
      for (std::int64_t i = 0; i < n; ++i) {
        const Wide r = dst[i] + static_cast<Wide>(src[i]);
        of |= r < static_cast<Wide>(src[i]);
        dst[i] = r;
      }
      overflow |= of;
      return;
    }
  }
  for (std::int64_t i = 0; i < n; ++i) add_product(dst[i], static_cast<Wide>(src[i]), static_cast<Wide>(w), overflow);
}

/// Computes output rows [begin, end) of a (*) b, calling sink(row, scratch,
/// lo, hi) for each nonempty one with the touched span [lo, hi). `scratch`
/// is workspace owned by the caller.
template <class Wide, class Cell, class Keep, class Sink>
void convolve_rows(const DenseTable<Cell>& a, const RowList<Cell>& b, const Lattice& out, std::size_t begin,
                   std::size_t end, std::vector<Wide>& scratch, Keep&& keep, Sink&& sink) {
  const std::size_t d = out.dims();
  const auto width = static_cast<std::size_t>(out.extent[d - 1]);
  scratch.resize(width * kRowBlock, Wide{});
  std::vector<std::int64_t> mo(d), ma(d);
  std::vector<Contribution<Cell>> parts;
  std::vector<std::int64_t> lo(kRowBlock), hi(kRowBlock);
  for (std::size_t o0 = begin; o0 < end; o0 += kRowBlock) {
    const std::size_t rows = std::min(kRowBlock, end - o0);
    parts.clear();
    std::int64_t span_lo = INT64_MAX, span_hi = INT64_MIN;
    for (std::size_t r = 0; r < rows; ++r) {
      lo[r] = INT64_MAX;
      hi[r] = INT64_MIN;
      if (!keep(o0 + r)) continue;
      out.unlinear(o0 + r, mo.data());
      for (std::size_t rb = 0; rb < b.row.size(); ++rb) {
        bool inside = true;
        for (std::size_t j = 0; j + 1 < d; ++j) {
          ma[j] = mo[j] - b.index[rb][j];
          if (ma[j] < 0 || ma[j] >= a.lattice.extent[j]) {
            inside = false;
            break;
          }
        }
        if (!inside) continue;
        const std::size_t ia = a.lattice.linear(ma.data());
        const auto& ra = a.rows[ia];
        if (ra.empty()) continue;
        const auto& rbw = *b.row[rb];
        lo[r] = std::min(lo[r], ra.lo + rbw.lo);
        hi[r] = std::max(hi[r], ra.hi() + rbw.hi() - 1);  // exclusive
        for (std::size_t ib = 0; ib < rbw.cells.size(); ++ib)
          if (!is_zero(rbw.cells[ib])) parts.push_back({ia, r, rbw.lo + static_cast<std::int64_t>(ib), &rbw.cells[ib]});
      }
      span_lo = std::min(span_lo, lo[r]);
      span_hi = std::max(span_hi, hi[r]);
    }
    if (span_lo >= span_hi) continue;
    std::sort(parts.begin(), parts.end(), [](const auto& x, const auto& y) {
      return x.a_row != y.a_row ? x.a_row < y.a_row : x.out_row < y.out_row;
    });
    bool overflow = false;
    for (std::int64_t t0 = span_lo; t0 < span_hi; t0 += kTile) {
      const std::int64_t t1 = std::min(span_hi, t0 + kTile);
      for (const auto& c : parts) {
        const auto& ra = a.rows[c.a_row];
        const std::int64_t first = ra.lo + c.begin;
        const std::int64_t s0 = std::max(t0, first);
        const std::int64_t s1 = std::min(t1, first + static_cast<std::int64_t>(ra.cells.size()));
        if (s0 < s1)
          add_segment(scratch.data() + c.out_row * width + static_cast<std::size_t>(s0), ra.cells.data() + (s0 - first),
                      s1 - s0, *c.weight, overflow);
      }
    }
    if (overflow) throw CellOverflow{};
    for (std::size_t r = 0; r < rows; ++r) {
      if (lo[r] >= hi[r]) continue;
      Wide* row = scratch.data() + r * width;
      sink(o0 + r, static_cast<const Wide*>(row), lo[r], hi[r]);
      std::fill(row + lo[r], row + hi[r], Wide{});
    }
  }
}

}  // namespace kernel

/// a (*) b. Strides must agree. `a` is consumed: its rows are released as
/// soon as no later output row can use them. With a mirror (both inputs
/// symmetric) only rows r <= mirror(r) are convolved; the rest are copied.
template <class Cell>
DenseTable<Cell> convolve(DenseTable<Cell> a, const DenseTable<Cell>& b, unsigned threads,
                          const Mirror* mirror = nullptr) {
  DenseTable<Cell> out;
  out.lattice = Lattice::sum(a.lattice, b.lattice);
  out.rows.resize(out.lattice.leading_rows());
  const kernel::RowList<Cell> bl(b);
  const std::size_t d = out.dims();

  std::vector<std::int64_t> reach(d, 0);
  for (std::size_t j = 0; j + 1 < d; ++j) reach[j] = b.lattice.extent[j] - 1;
  std::size_t free_cursor = 0;
  std::vector<std::int64_t> ma(d), mo(d);

  const std::size_t total = out.rows.size();
  std::vector<std::size_t> image;
  if (mirror) {
    image.resize(total);
    for (std::size_t r = 0; r < total; ++r) image[r] = mirror->row(out.lattice, r, mo.data());
  }
  auto keep = [&](std::size_t r) { return image.empty() || r <= image[r]; };
  std::size_t last_kept = total;
  for (std::size_t r = total; r-- > 0;)
    if (keep(r)) {
      last_kept = r + 1;
      break;
    }

  const std::size_t block = kernel::kRowBlock * 4 * std::max(1u, threads);
  std::vector<std::vector<Cell>> scratch(std::max(1u, threads));
  for (std::size_t start = 0; start < last_kept; start += block) {
    const std::size_t stop = std::min(last_kept, start + block);
    parallel_chunks(stop - start, threads, [&](unsigned w, std::size_t b0, std::size_t b1) {
      kernel::convolve_rows<Cell>(a, bl, out.lattice, start + b0, start + b1, scratch[w], keep,
                                  [&](std::size_t o, const Cell* s, std::int64_t lo, std::int64_t hi) {
                                    std::int64_t first = lo, last = hi - 1;
                                    while (first <= last && is_zero(s[first])) ++first;
                                    while (last >= first && is_zero(s[last])) --last;
                                    if (first > last) return;
                                    auto& row = out.rows[o];
                                    row.lo = first;
                                    row.cells.assign(s + first, s + last + 1);
                                  });
    });
    while (free_cursor < a.rows.size()) {
      a.lattice.unlinear(free_cursor, ma.data());
      for (std::size_t j = 0; j + 1 < d; ++j) mo[j] = ma[j] + reach[j];
      if (out.lattice.linear(mo.data()) >= stop) break;
      std::vector<Cell>().swap(a.rows[free_cursor].cells);
      ++free_cursor;
    }
  }
  a = {};
  for (std::size_t r = 0; r < image.size(); ++r)
    if (!keep(r)) out.rows[r] = mirror->reflect(out.lattice, out.rows[image[r]]);
  return out;
}

/// sum over v of ((a (*) b)(v))^2 without materializing a (*) b. With a
/// mirror each pair of reflected rows is computed once.
template <class Cell, class Wide>
Count convolve_square_sum(const DenseTable<Cell>& a, const DenseTable<Cell>& b, unsigned threads,
                          const Mirror* mirror = nullptr) {
  const Lattice out = Lattice::sum(a.lattice, b.lattice);
  const kernel::RowList<Cell> bl(b);
  const std::size_t total = out.leading_rows();
  const unsigned workers = std::max(1u, threads);
  std::vector<Accumulator> single(workers), paired(workers);
  std::vector<std::vector<Wide>> scratch(workers);
  parallel_chunks(total, workers, [&](unsigned w, std::size_t b0, std::size_t b1) {
    std::vector<std::int64_t> idx(out.dims());
    std::size_t cached = total, cached_image = 0;
    auto image = [&](std::size_t r) {
      if (r != cached) {
        cached = r;
        cached_image = mirror ? mirror->row(out, r, idx.data()) : r;
      }
      return cached_image;
    };
    kernel::convolve_rows<Wide>(a, bl, out, b0, b1, scratch[w], [&](std::size_t r) { return r <= image(r); },
                                [&](std::size_t o, const Wide* s, std::int64_t lo, std::int64_t hi) {
                                  auto& acc = image(o) == o ? single[w] : paired[w];
                                  for (std::int64_t i = lo; i < hi; ++i)
                                    if (!is_zero(s[i])) acc.add_square(s[i]);
                                });
  });
  Count total_sum = 0;
  for (const auto& p : single) total_sum += p.value();
  for (const auto& p : paired) total_sum += 2 * p.value();
  return total_sum;
}

template <class Cell>
Count square_sum(const DenseTable<Cell>& a) {
  Accumulator acc;
  for (const auto& row : a.rows)
    for (const auto& c : row.cells)
      if (!is_zero(c)) acc.add_square(c);
  return acc.value();
}

/// sum_v a(v) * b(target - v); lattices may differ.
template <class Cell>
Count join(const DenseTable<Cell>& a, const DenseTable<Cell>& b, const Key& target, unsigned threads) {
  const std::size_t d = a.dims();
  const unsigned workers = std::max(1u, threads);
  std::vector<Accumulator> partial(workers);
  const auto& la = a.lattice;
  const auto& lb = b.lattice;
  parallel_chunks(a.rows.size(), workers, [&](unsigned w, std::size_t r0, std::size_t r1) {
    std::vector<std::int64_t> ia(d), ib(d);
    for (std::size_t r = r0; r < r1; ++r) {
      const auto& ra = a.rows[r];
      if (ra.empty()) continue;
      la.unlinear(r, ia.data());
      bool inside = true;
      for (std::size_t j = 0; j + 1 < d && inside; ++j) {
        const std::int64_t need = target[j] - (la.origin[j] + la.stride[j] * ia[j]) - lb.origin[j];
        if (need % lb.stride[j] != 0) inside = false;
        ib[j] = need / lb.stride[j];
        if (ib[j] < 0 || ib[j] >= lb.extent[j]) inside = false;
      }
      if (!inside) continue;
      const auto& rb = b.rows[lb.linear(ib.data())];
      if (rb.empty()) continue;
      for (std::size_t i = 0; i < ra.cells.size(); ++i) {
        if (is_zero(ra.cells[i])) continue;
        const std::int64_t va = la.origin[d - 1] + la.stride[d - 1] * (ra.lo + static_cast<std::int64_t>(i));
        const std::int64_t need = target[d - 1] - va - lb.origin[d - 1];
        if (need % lb.stride[d - 1] != 0) continue;
        const std::int64_t jb = need / lb.stride[d - 1];
        if (jb < rb.lo || jb >= rb.hi()) continue;
        partial[w].add_product(ra.cells[i], rb.cells[static_cast<std::size_t>(jb - rb.lo)]);
      }
    }
  });
  Count total = 0;
  for (const auto& p : partial) total += p.value();
  return total;
}

}  // namespace vinolab::detail
