#include "vinolab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include "dense_table.hpp"
#include "sparse_table.hpp"

namespace vinolab {

using detail::Key;
using detail::SparseTable;

// ---------------------------------------------------------------------------
// Domain types

ExponentSet::ExponentSet(std::vector<int> exponents) : exps_(std::move(exponents)) {
  if (exps_.empty()) throw InvalidArgument("exponent set must be nonempty");
  std::sort(exps_.begin(), exps_.end());
  if (std::adjacent_find(exps_.begin(), exps_.end()) != exps_.end())
    throw InvalidArgument("exponent set has repeated exponents");
  if (exps_.front() < 1) throw InvalidArgument("exponents must be positive");
  if (exps_.back() > kMaxExponent) throw InvalidArgument("exponent exceeds " + std::to_string(kMaxExponent));
}

ExponentSet ExponentSet::full(int k) {
  if (k < 1) throw InvalidArgument("degree must be positive");
  std::vector<int> e(static_cast<std::size_t>(k));
  std::iota(e.begin(), e.end(), 1);
  return ExponentSet(std::move(e));
}

ExponentSet ExponentSet::full_without(int k, int omit) {
  std::vector<int> e;
  for (int j = 1; j <= k; ++j)
    if (j != omit) e.push_back(j);
  return ExponentSet(std::move(e));
}

bool ExponentSet::contains(int j) const { return index_of(j) >= 0; }

int ExponentSet::index_of(int j) const {
  auto it = std::lower_bound(exps_.begin(), exps_.end(), j);
  return (it != exps_.end() && *it == j) ? static_cast<int>(it - exps_.begin()) : -1;
}

bool ExponentSet::is_superset_of(const ExponentSet& other) const {
  return std::includes(exps_.begin(), exps_.end(), other.exps_.begin(), other.exps_.end());
}

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

std::vector<std::int64_t> VariableBlock::admissible_values() const {
  std::vector<std::int64_t> v;
  std::int64_t x = interval.start;
  std::int64_t step = 1;
  if (residue) {
    x += floor_mod(residue->residue - x, residue->modulus);
    step = residue->modulus;
  }
  for (; x <= interval.last(); x += step) v.push_back(x);
  return v;
}

void SystemSpec::validate() const {
  if (blocks.empty()) throw InvalidArgument("system needs at least one variable block");
  if (total_variables() > 64) throw InvalidArgument("more than 64 variables");
  for (const auto& b : blocks) {
    if (b.count < 1) throw InvalidArgument("block count must be positive");
    if (b.interval.length < 1) throw InvalidArgument("interval length must be positive");
    if (b.sign != 1 && b.sign != -1) throw InvalidArgument("block sign must be +1 or -1");
    if (b.residue && (b.residue->modulus < 1 || b.residue->residue < 0 || b.residue->residue >= b.residue->modulus))
      throw InvalidArgument("residue class must satisfy 0 <= c < m");
    if (b.distinct_mod && *b.distinct_mod < 1) throw InvalidArgument("distinct_mod must be positive");
    if (b.coefficients && b.coefficients->size() != exponents.size())
      throw InvalidArgument("coefficient vector length differs from exponent set");
  }
  if (target && target->size() != exponents.size()) throw InvalidArgument("target length differs from exponent set");
}

int SystemSpec::total_variables() const {
  int n = 0;
  for (const auto& b : blocks) n += b.count;
  return n;
}

PowerSumVector SystemSpec::target_or_zero() const {
  if (target) return *target;
  return PowerSumVector{std::vector<BigInt>(exponents.size(), BigInt(0))};
}

Count RepTable::total() const {
  Count t = 0;
  for (const auto& [k, c] : entries) t += c;
  return t;
}

Count RepTable::at(const PowerSumVector& v) const {
  auto it = entries.find(v);
  return it == entries.end() ? Count(0) : it->second;
}

PowerSumVector power_sums(std::int64_t x, const ExponentSet& exponents,
                          const std::optional<std::vector<std::int64_t>>& coefficients) {
  if (coefficients && coefficients->size() != exponents.size())
    throw InvalidArgument("coefficient vector length differs from exponent set");
  PowerSumVector v;
  v.components.reserve(exponents.size());
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    BigInt p = ipow(BigInt(x), static_cast<unsigned>(exponents[i]));
    if (coefficients) p *= (*coefficients)[i];
    v.components.push_back(std::move(p));
  }
  return v;
}

SystemSpec uniform_spec(const ExponentSet& exponents, int s, Interval interval, int sign) {
  SystemSpec spec;
  spec.exponents = exponents;
  VariableBlock b;
  b.count = s;
  b.interval = interval;
  b.sign = sign;
  spec.blocks.push_back(b);
  return spec;
}

SystemSpec paired_spec(const ExponentSet& exponents, int s, Interval interval) {
  SystemSpec spec = uniform_spec(exponents, s, interval, 1);
  VariableBlock neg = spec.blocks.front();
  neg.sign = -1;
  spec.blocks.push_back(neg);
  return spec;
}

// ---------------------------------------------------------------------------
// Engine internals

namespace {

constexpr std::int64_t kKeyLimit = std::int64_t{1} << 62;

/// One variable block prepared for table building: the signed contribution
/// of each admissible value.
struct Factor {
  std::vector<Key> points;
  std::vector<std::int64_t> point_class;  // value mod distinct_mod
  int count = 1;
  std::optional<std::int64_t> distinct_mod;
  bool infeasible = false;
  std::vector<bool> odd_exponent;

  std::size_t dims() const { return points.empty() ? 0 : points.front().size(); }
};

Factor make_factor(const ExponentSet& e, const VariableBlock& b, std::int64_t per_variable_limit) {
  Factor f;
  f.count = b.count;
  f.distinct_mod = b.distinct_mod;
  f.infeasible = b.infeasible();
  for (int j : e) f.odd_exponent.push_back(j % 2 == 1);
  for (std::int64_t x : b.admissible_values()) {
    Key k(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      BigInt v = ipow(BigInt(x), static_cast<unsigned>(e[i])) * b.sign;
      if (b.coefficients) v *= (*b.coefficients)[i];
      if (abs(v) > per_variable_limit) throw TooLarge("power sums exceed the 64-bit key range");
      k[i] = static_cast<std::int64_t>(v);
    }
    f.points.push_back(std::move(k));
    if (b.distinct_mod) f.point_class.push_back(floor_mod(x, *b.distinct_mod));
  }
  return f;
}

std::vector<Factor> make_factors(const SystemSpec& spec, const std::vector<VariableBlock>& blocks) {
  const std::int64_t limit = kKeyLimit / std::max(1, spec.total_variables());
  std::vector<Factor> out;
  for (const auto& b : blocks) out.push_back(make_factor(spec.exponents, b, limit));
  return out;
}

/// Predicted bounding box and tuple count of the table of a list of factors.
struct Prediction {
  long double box_cells = 1;
  long double tuples = 1;
  long double second_box = 0;  // box of the table one variable earlier (alive at the peak)
  std::size_t leading_rows = 1;

  long double entries() const { return std::min(box_cells, tuples); }
};

/// Predicts the table of `factors` with `drop_last_variable` variables of the
/// last factor removed.
Prediction predict(const std::vector<Factor>& factors, std::size_t dims, int drop_last_variable = 0) {
  Prediction p;
  if (dims == 0) return p;
  auto box_for = [&](int drop) {
    long double cells = 1;
    std::size_t lead = 1;
    bool lead_ok = true;
    for (std::size_t j = 0; j < dims; ++j) {
      long double lo = 0, hi = 0;
      std::int64_t g = 0;
      for (std::size_t fi = 0; fi < factors.size(); ++fi) {
        const auto& f = factors[fi];
        if (f.points.empty()) continue;
        std::int64_t mn = f.points[0][j], mx = f.points[0][j];
        for (const auto& pt : f.points) {
          mn = std::min(mn, pt[j]);
          mx = std::max(mx, pt[j]);
        }
        for (const auto& pt : f.points) g = std::gcd(g, pt[j] - mn);
        int c = f.count;
        if (fi + 1 == factors.size()) c -= drop;
        lo += static_cast<long double>(mn) * c;
        hi += static_cast<long double>(mx) * c;
      }
      if (g == 0) g = 1;
      const long double ext = (hi - lo) / g + 1;
      cells *= ext;
      if (j + 1 < dims) {
        if (ext > 1e12L || static_cast<long double>(lead) * ext > 1e15L)
          lead_ok = false;
        else
          lead *= static_cast<std::size_t>(ext);
      }
    }
    return std::make_pair(cells, lead_ok ? lead : std::numeric_limits<std::size_t>::max());
  };
  auto [cells, lead] = box_for(drop_last_variable);
  p.box_cells = cells;
  p.leading_rows = lead;
  if (!factors.empty() && factors.back().count > drop_last_variable + 1)
    p.second_box = box_for(drop_last_variable + 1).first;
  for (std::size_t fi = 0; fi < factors.size(); ++fi) {
    const int c = factors[fi].count - (fi + 1 == factors.size() ? drop_last_variable : 0);
    p.tuples *= std::pow(static_cast<long double>(factors[fi].points.size()), c);
  }
  return p;
}

enum class Path { kSparse, kDense };

Path choose_path(const Prediction& p, const EngineOptions& opt) {
  const long double budget = static_cast<long double>(opt.budget_bytes);
  const long double dense_bytes =
      (p.box_cells + p.second_box) * sizeof(std::uint32_t) + static_cast<long double>(p.leading_rows) * 32.0L;
  const long double sparse_bytes = p.entries() * 96.0L;
  const bool dense_ok = p.leading_rows < (std::size_t{1} << 31) && dense_bytes <= budget;
  const bool sparse_ok = sparse_bytes <= budget;
  switch (opt.path) {
    case TablePath::kDense:
      if (!dense_ok) throw BudgetExceeded("dense table predicted to exceed the memory budget");
      return Path::kDense;
    case TablePath::kSparse:
      if (!sparse_ok) throw BudgetExceeded("sparse table predicted to exceed the memory budget");
      return Path::kSparse;
    case TablePath::kAuto:
      break;
  }
  if (dense_ok && (p.box_cells <= 8.0L * p.tuples || p.box_cells <= (1 << 20))) return Path::kDense;
  if (sparse_ok) return Path::kSparse;
  if (dense_ok) return Path::kDense;
  throw BudgetExceeded("table predicted to exceed the memory budget (" + std::to_string(static_cast<double>(p.entries())) +
                       " entries)");
}

// --- sparse construction ----------------------------------------------------

SparseTable sparse_power(const SparseTable& single, int count) {
  SparseTable acc = single;
  int t = 1;
  while (t < count) {
    if (2 * t <= count && acc.cells.size() < static_cast<std::size_t>(t) * single.cells.size()) {
      acc = detail::convolve(acc, acc);
      t *= 2;
    } else {
      acc = detail::convolve(acc, single);
      t += 1;
    }
  }
  return acc;
}

std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  long double r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    r = r * static_cast<long double>(n - i) / static_cast<long double>(i + 1);
    if (r > cap) return cap + 1;
  }
  return static_cast<std::size_t>(std::llround(r));
}

/// Ordered tuples with pairwise distinct classes: c! times the sum over
/// c-subsets of classes of the product of per-class tables.
SparseTable sparse_distinct_block(const Factor& f, std::size_t dims) {
  SparseTable out;
  out.dims = dims;
  if (f.infeasible) return out;
  std::vector<std::int64_t> classes = f.point_class;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  const auto c = static_cast<std::size_t>(f.count);
  if (classes.size() < c) return out;
  if (binomial_capped(classes.size(), c, 1000000) > 1000000)
    throw TooLarge("too many residue patterns for a distinct_mod block");
  std::vector<SparseTable> per_class;
  for (auto cls : classes) {
    std::vector<Key> pts;
    for (std::size_t i = 0; i < f.points.size(); ++i)
      if (f.point_class[i] == cls) pts.push_back(f.points[i]);
    per_class.push_back(SparseTable::from_points(dims, pts));
  }
  std::vector<std::size_t> pick(c);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    SparseTable t = per_class[pick[0]];
    for (std::size_t i = 1; i < c; ++i) t = detail::convolve(t, per_class[pick[i]]);
    detail::accumulate(out, t);
    // next combination
    std::size_t i = c;
    while (i > 0 && pick[i - 1] == classes.size() - c + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < c; ++j) pick[j] = pick[j - 1] + 1;
  }
  Count fact = 1;
  for (std::size_t i = 2; i <= c; ++i) fact *= i;
  return detail::scaled(std::move(out), fact);
}

SparseTable sparse_factor_table(const Factor& f, std::size_t dims) {
  if (f.distinct_mod && f.count > 1) return sparse_distinct_block(f, dims);
  if (f.infeasible) return SparseTable{dims, {}};
  return sparse_power(SparseTable::from_points(dims, f.points), f.count);
}

SparseTable sparse_table(const std::vector<Factor>& factors, std::size_t dims) {
  SparseTable acc = SparseTable::unit(dims);
  for (const auto& f : factors) acc = detail::convolve(acc, sparse_factor_table(f, dims));
  return acc;
}

// --- dense construction -----------------------------------------------------

template <class Cell>
using Dense = detail::DenseTable<Cell>;

template <class Cell>
Dense<Cell> dense_unit(std::size_t dims) {
  Dense<Cell> t;
  t.lattice.origin.assign(dims, 0);
  t.lattice.stride.assign(dims, 1);
  t.lattice.extent.assign(dims, 1);
  t.rows.resize(1);
  t.rows[0].lo = 0;
  t.rows[0].cells.assign(1, Cell{1});
  return t;
}

template <class Cell>
Dense<Cell> dense_points(std::size_t dims, const std::vector<Key>& points) {
  return detail::dense_from_sparse<Cell>(SparseTable::from_points(dims, points), detail::Lattice::of_points(dims, points));
}

template <class Cell>
Dense<Cell> dense_product(Dense<Cell> a, const Dense<Cell>& b, unsigned threads) {
  if (a.lattice.stride == b.lattice.stride) return detail::convolve(std::move(a), b, threads);
  std::vector<std::int64_t> g(a.dims());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = std::gcd(a.lattice.stride[j], b.lattice.stride[j]);
  return detail::convolve(detail::regrid(a, g), detail::regrid(b, g), threads);
}

template <class Cell>
Dense<Cell> dense_power(const Dense<Cell>& single, int count, unsigned threads,
                        const detail::Mirror* mirror = nullptr) {
  Dense<Cell> acc = single;
  const std::size_t n1 = single.stored_cells();
  int t = 1;
  while (t < count) {
    if (2 * t <= count && acc.stored_cells() < static_cast<std::size_t>(t) * n1) {
      Dense<Cell> copy = acc;
      acc = detail::convolve(std::move(acc), copy, threads, mirror);
      t *= 2;
    } else {
      acc = detail::convolve(std::move(acc), single, threads, mirror);
      t += 1;
    }
  }
  return acc;
}

template <class Cell>
Dense<Cell> dense_factor_table(const Factor& f, std::size_t dims, unsigned threads) {
  if ((f.distinct_mod && f.count > 1) || f.infeasible || f.points.empty()) {
    SparseTable s = sparse_factor_table(f, dims);
    std::vector<Key> keys;
    keys.reserve(s.cells.size());
    for (const auto& [k, c] : s.cells) keys.push_back(k);
    return detail::dense_from_sparse<Cell>(s, detail::Lattice::of_points(dims, keys));
  }
  return dense_power(dense_points<Cell>(dims, f.points), f.count, threads);
}

template <class Cell>
Dense<Cell> dense_table(const std::vector<Factor>& factors, std::size_t dims, unsigned threads) {
  if (factors.empty()) return dense_unit<Cell>(dims);
  Dense<Cell> acc = dense_factor_table<Cell>(factors[0], dims, threads);
  for (std::size_t i = 1; i < factors.size(); ++i)
    acc = dense_product(std::move(acc), dense_factor_table<Cell>(factors[i], dims, threads), threads);
  return acc;
}

template <class Cell>
struct WiderOf;
template <>
struct WiderOf<std::uint32_t> {
  using type = std::uint64_t;
};
template <>
struct WiderOf<std::uint64_t> {
  using type = detail::u128;
};
template <>
struct WiderOf<Count> {
  using type = Count;
};

/// Runs fn<Cell>() for Cell = uint32, uint64, Count until no overflow.
template <class Fn>
auto with_promotion(Fn&& fn) {
  try {
    return fn.template operator()<std::uint32_t>();
  } catch (const detail::CellOverflow&) {
  }
  try {
    return fn.template operator()<std::uint64_t>();
  } catch (const detail::CellOverflow&) {
  }
  return fn.template operator()<Count>();
}

SparseTable build_sparse_or_dense(const std::vector<Factor>& factors, std::size_t dims, const EngineOptions& opt) {
  const Path path = choose_path(predict(factors, dims), opt);
  if (path == Path::kSparse) return sparse_table(factors, dims);
  return with_promotion([&]<class Cell>() { return detail::dense_to_sparse(dense_table<Cell>(factors, dims, opt.threads)); });
}

RepTable to_rep_table(const SparseTable& t, const SystemSpec& spec) {
  RepTable out;
  out.spec = spec;
  for (const auto& [k, c] : t.cells) {
    if (c.is_zero()) continue;
    PowerSumVector v;
    v.components.reserve(k.size());
    for (auto x : k) v.components.emplace_back(x);
    out.entries.emplace(std::move(v), c);
  }
  return out;
}

/// The reflection negating the odd-exponent coordinates, if the point set
/// is invariant under it (a block symmetric about 0).
std::optional<detail::Mirror> point_mirror(const Factor& f) {
  detail::Mirror m{f.odd_exponent};
  if (f.points.empty() || !m.active()) return std::nullopt;
  std::unordered_set<Key, detail::KeyHash> set(f.points.begin(), f.points.end());
  for (const auto& p : f.points) {
    Key q = p;
    for (std::size_t j = 0; j < q.size(); ++j)
      if (m.flip[j]) q[j] = -q[j];
    if (!set.contains(q)) return std::nullopt;
  }
  return m;
}

/// sum_v r(v)^2 for the table of `count` copies of one block.
Count self_square_sum(const Factor& f, std::size_t dims, const EngineOptions& opt) {
  const Path path = choose_path(predict({f}, dims, 1), opt);
  if (path == Path::kSparse || f.count == 1 || (f.distinct_mod && f.count > 1) || f.infeasible)
    return detail::square_sum(sparse_factor_table(f, dims));
  return with_promotion([&]<class Cell>() -> Count {
    using Wide = typename WiderOf<Cell>::type;
    const auto mirror = point_mirror(f);
    const detail::Mirror* m = mirror ? &*mirror : nullptr;
    auto single = dense_points<Cell>(dims, f.points);
    auto prev = dense_power(single, f.count - 1, opt.threads, m);
    return detail::convolve_square_sum<Cell, Wide>(prev, single, opt.threads, m);
  });
}

/// Optional int64 form of a target; nullopt if out of the reachable range.
std::optional<Key> key_of(const PowerSumVector& v) {
  Key k(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (abs(v.components[i]) > kKeyLimit) return std::nullopt;
    k[i] = static_cast<std::int64_t>(v.components[i]);
  }
  return k;
}

/// Splits the blocks into two lists with balanced predicted table sizes. A
/// block without a distinctness condition may be cut in two.
std::pair<std::vector<VariableBlock>, std::vector<VariableBlock>> split_blocks(const SystemSpec& spec) {
  struct Cut {
    std::size_t block;
    int take;  // variables of `block` going to the first half
  };
  std::vector<Cut> cuts;
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    const auto& blk = spec.blocks[b];
    const bool divisible = !(blk.distinct_mod && blk.count > 1);
    if (divisible)
      for (int t = 0; t < blk.count; ++t) cuts.push_back({b, t});
    else
      cuts.push_back({b, 0});
  }
  cuts.push_back({spec.blocks.size(), 0});

  auto halves = [&](const Cut& c) {
    std::vector<VariableBlock> first, second;
    for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
      if (b < c.block) {
        first.push_back(spec.blocks[b]);
      } else if (b > c.block) {
        second.push_back(spec.blocks[b]);
      } else {
        VariableBlock lo = spec.blocks[b], hi = spec.blocks[b];
        lo.count = c.take;
        hi.count = spec.blocks[b].count - c.take;
        if (lo.count > 0) first.push_back(lo);
        if (hi.count > 0) second.push_back(hi);
      }
    }
    return std::make_pair(first, second);
  };

  const std::size_t dims = spec.exponents.size();
  long double best = std::numeric_limits<long double>::infinity();
  std::pair<std::vector<VariableBlock>, std::vector<VariableBlock>> chosen;
  for (const auto& c : cuts) {
    auto h = halves(c);
    const auto pa = predict(make_factors(spec, h.first), dims).entries();
    const auto pb = predict(make_factors(spec, h.second), dims).entries();
    const long double cost = std::max(pa, pb);
    if (cost < best) {
      best = cost;
      chosen = std::move(h);
    }
  }
  return chosen;
}

}  // namespace

// ---------------------------------------------------------------------------
// Operations

RepTable build_rep_table(const SystemSpec& spec, const EngineOptions& options) {
  spec.validate();
  const auto factors = make_factors(spec, spec.blocks);
  return to_rep_table(build_sparse_or_dense(factors, spec.exponents.size(), options), spec);
}

namespace {

Count mean_value_of_block(const ExponentSet& exponents, const VariableBlock& block, const EngineOptions& options) {
  SystemSpec spec;
  spec.exponents = exponents;
  spec.blocks = {block, block};
  spec.blocks[1].sign = -1;
  spec.validate();
  const Factor f = make_factors(spec, {block}).front();
  return self_square_sum(f, exponents.size(), options);
}

}  // namespace

Count mean_value(const ExponentSet& exponents, int s, Interval interval, const EngineOptions& options) {
  if (s < 1) throw InvalidArgument("s must be positive");
  VariableBlock b;
  b.count = s;
  b.interval = interval;
  return mean_value_of_block(exponents, b, options);
}

Count vinogradov_mean_value(int k, int s, std::int64_t X, const EngineOptions& options) {
  if (s < 1 || X < 1) throw InvalidArgument("s and X must be positive");
  // x -> 2x - (X+1) maps [1, X] onto the odd (X even) or even (X odd)
  // integers of [-(X-1), X-1]; the full system {1..k} is invariant under
  // affine substitutions, so the count is unchanged.
  VariableBlock b;
  b.count = s;
  if (X % 2 == 0) {
    b.interval = {-(X - 1), 2 * X - 1};
    b.residue = ResidueClass{2, 1};
  } else {
    b.interval = {-(X - 1) / 2, X};
  }
  return mean_value_of_block(ExponentSet::full(k), b, options);
}

Count constrained_count(const SystemSpec& spec, const EngineOptions& options) {
  spec.validate();
  const std::size_t dims = spec.exponents.size();
  const auto target = key_of(spec.target_or_zero());
  if (!target) return 0;
  for (const auto& b : spec.blocks)
    if (b.infeasible()) return 0;
  auto [first, second] = split_blocks(spec);
  const auto fa = make_factors(spec, first);
  const auto fb = make_factors(spec, second);
  const auto pa = predict(fa, dims);
  const auto pb = predict(fb, dims);
  Prediction joint = pa;
  joint.box_cells = pa.box_cells + pb.box_cells;
  joint.tuples = pa.tuples + pb.tuples;
  joint.leading_rows = std::max(pa.leading_rows, pb.leading_rows);
  if (choose_path(joint, options) == Path::kSparse)
    return detail::join(sparse_table(fa, dims), sparse_table(fb, dims), *target);
  return with_promotion([&]<class Cell>() -> Count {
    auto ta = dense_table<Cell>(fa, dims, options.threads);
    auto tb = dense_table<Cell>(fb, dims, options.threads);
    return detail::join(ta, tb, *target, options.threads);
  });
}

Count brute_force_count(const SystemSpec& spec) {
  spec.validate();
  using i128 = __int128;
  const std::size_t dims = spec.exponents.size();
  struct Var {
    std::vector<std::vector<i128>> values;  // per admissible value, its key
    std::vector<std::int64_t> cls;
    std::size_t block = 0;
    std::optional<std::int64_t> distinct_mod;
  };
  std::vector<Var> vars;
  long double tuples = 1;
  long double magnitude = 0;
  for (std::size_t bi = 0; bi < spec.blocks.size(); ++bi) {
    const auto& b = spec.blocks[bi];
    if (b.infeasible()) return 0;
    Var v;
    v.block = bi;
    v.distinct_mod = b.distinct_mod;
    long double block_max = 0;
    for (std::int64_t x : b.admissible_values()) {
      std::vector<i128> key(dims);
      for (std::size_t i = 0; i < dims; ++i) {
        BigInt p = ipow(BigInt(x), static_cast<unsigned>(spec.exponents[i])) * b.sign;
        if (b.coefficients) p *= (*b.coefficients)[i];
        if (abs(p) > (BigInt(1) << 100)) throw TooLarge("power sums too large for enumeration");
        key[i] = static_cast<i128>(static_cast<std::int64_t>(p >> 50)) * (i128{1} << 50) +
                 static_cast<i128>(static_cast<std::int64_t>(p & ((BigInt(1) << 50) - 1)));
        block_max = std::max(block_max, static_cast<long double>(abs(p)));
      }
      v.values.push_back(std::move(key));
      if (b.distinct_mod) v.cls.push_back(floor_mod(x, *b.distinct_mod));
    }
    tuples *= std::pow(static_cast<long double>(v.values.size()), b.count);
    magnitude += block_max * b.count;
    for (int c = 0; c < b.count; ++c) vars.push_back(v);
  }
  if (tuples > 1e8L) throw TooLarge("more than 1e8 assignments to enumerate");
  if (magnitude > 1e36L) throw TooLarge("power sums too large for enumeration");

  std::vector<i128> target(dims, 0);
  {
    const auto t = spec.target_or_zero();
    for (std::size_t i = 0; i < dims; ++i) {
      if (abs(t.components[i]) > (BigInt(1) << 120)) return 0;
      const BigInt& c = t.components[i];
      target[i] = static_cast<i128>(static_cast<std::int64_t>(c >> 60)) * (i128{1} << 60) +
                  static_cast<i128>(static_cast<std::int64_t>(c & ((BigInt(1) << 60) - 1)));
    }
  }

  const std::size_t n = vars.size();
  std::vector<std::vector<i128>> partial(n + 1, std::vector<i128>(dims, 0));
  std::vector<std::size_t> choice(n, 0);
  std::uint64_t found = 0;
  // Iterative depth-first enumeration; partial[d] holds the sums of the
  // first d variables.
  std::size_t depth = 0;
  choice.assign(n, 0);
  while (true) {
    if (depth == n) {
      if (partial[n] == target) ++found;
      if (n == 0) break;
      --depth;
      ++choice[depth];
      continue;
    }
    const Var& v = vars[depth];
    if (choice[depth] >= v.values.size()) {
      choice[depth] = 0;
      if (depth == 0) break;
      --depth;
      ++choice[depth];
      continue;
    }
    bool ok = true;
    if (v.distinct_mod) {
      const std::int64_t c = v.cls[choice[depth]];
      for (std::size_t e = 0; e < depth && ok; ++e)
        if (vars[e].block == v.block && vars[e].cls[choice[e]] == c) ok = false;
    }
    if (!ok) {
      ++choice[depth];
      continue;
    }
    const auto& key = v.values[choice[depth]];
    for (std::size_t i = 0; i < dims; ++i) partial[depth + 1][i] = partial[depth][i] + key[i];
    ++depth;
  }
  return Count(found);
}

Count admissible_assignments(const SystemSpec& spec) {
  spec.validate();
  Count total = 1;
  for (const auto& b : spec.blocks) {
    if (b.infeasible()) return 0;
    const auto values = b.admissible_values();
    if (!b.distinct_mod || b.count == 1) {
      total *= ipow(Count(values.size()), static_cast<unsigned>(b.count));
      continue;
    }
    // c! * e_c(class sizes)
    std::map<std::int64_t, Count> sizes;
    for (auto x : values) sizes[floor_mod(x, *b.distinct_mod)] += 1;
    std::vector<Count> e(static_cast<std::size_t>(b.count) + 1, Count(0));
    e[0] = 1;
    for (const auto& [cls, n] : sizes)
      for (std::size_t j = e.size() - 1; j >= 1; --j) e[j] += e[j - 1] * n;
    Count fact = 1;
    for (int i = 2; i <= b.count; ++i) fact *= i;
    total *= fact * e.back();
  }
  return total;
}

Count difference_count(int k, int s, Interval interval, int j, std::int64_t h, const EngineOptions& options) {
  if (j < 1 || j > k) throw InvalidArgument("difference exponent must satisfy 1 <= j <= k");
  SystemSpec spec = paired_spec(ExponentSet::full(k), s, interval);
  PowerSumVector t{std::vector<BigInt>(static_cast<std::size_t>(k), BigInt(0))};
  t.components[static_cast<std::size_t>(j - 1)] = h;
  spec.target = t;
  return constrained_count(spec, options);
}

LowerBounds lower_bounds(const ExponentSet& exponents, int s, Interval interval, const EngineOptions& options) {
  if (s < 1) throw InvalidArgument("s must be positive");
  LowerBounds lb;
  lb.diagonal = ipow(Count(interval.length), static_cast<unsigned>(s));
  const RepTable r = build_rep_table(uniform_spec(exponents, s, interval), options);
  lb.support_size = r.support_size();
  lb.cauchy_schwarz = Rational(ipow(Count(interval.length), static_cast<unsigned>(2 * s)), Count(lb.support_size));
  return lb;
}

RepTable marginalize_last(const RepTable& table) {
  const auto& e = table.spec.exponents;
  if (e.size() < 2) throw InvalidArgument("cannot marginalize a one-coordinate table");
  RepTable out;
  out.spec = table.spec;
  out.spec.exponents = ExponentSet(std::vector<int>(e.values().begin(), e.values().end() - 1));
  for (auto& b : out.spec.blocks)
    if (b.coefficients) b.coefficients->pop_back();
  if (out.spec.target) out.spec.target->components.pop_back();
  for (const auto& [k, c] : table.entries) {
    PowerSumVector head{std::vector<BigInt>(k.components.begin(), k.components.end() - 1)};
    out.entries[head] += c;
  }
  return out;
}

}  // namespace vinolab
