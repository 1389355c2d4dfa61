#pragma once

// Exact solution counts of translation-dilation invariant Diophantine systems.
//
// A system is described by a SystemSpec: a set E of exponents and a list of
// variable blocks. Every variable x of a block contributes the vector
// (sign * c_j * x^j)_{j in E}; a solution is an assignment of all variables
// whose contributions sum to the target vector (zero by default). The mean
// value J_{s,k}(X) is the special case of s positive and s negative unit
// variables on [1, X] with E = {1..k}.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "vinolab/common.hpp"

namespace vinolab {

/// Sorted set of distinct positive exponents.
class ExponentSet {
 public:
  static constexpr int kMaxExponent = 32;

  ExponentSet() = default;
  /// Sorts and validates; throws InvalidArgument on empty, non-positive,
  /// repeated or too-large exponents.
  explicit ExponentSet(std::vector<int> exponents);

  /// {1, ..., k}
  static ExponentSet full(int k);
  /// {1, ..., k} without the single exponent `omit`.
  static ExponentSet full_without(int k, int omit);

  std::size_t size() const { return exps_.size(); }
  int operator[](std::size_t i) const { return exps_[i]; }
  int max() const { return exps_.back(); }
  bool contains(int j) const;
  /// Position of exponent j, or -1.
  int index_of(int j) const;
  bool is_superset_of(const ExponentSet& other) const;
  const std::vector<int>& values() const { return exps_; }

  auto begin() const { return exps_.begin(); }
  auto end() const { return exps_.end(); }

  friend bool operator==(const ExponentSet&, const ExponentSet&) = default;

 private:
  std::vector<int> exps_;
};

/// Integers start, start+1, ..., start+length-1.
struct Interval {
  std::int64_t start = 1;
  std::int64_t length = 1;

  std::int64_t last() const { return start + length - 1; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct ResidueClass {
  std::int64_t modulus = 1;
  std::int64_t residue = 0;
  friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
};

struct VariableBlock {
  int count = 1;
  Interval interval;
  int sign = 1;
  std::optional<ResidueClass> residue;
  /// Variables of the block must be pairwise distinct modulo this value.
  std::optional<std::int64_t> distinct_mod;
  /// One coefficient per exponent; absent means all ones.
  std::optional<std::vector<std::int64_t>> coefficients;

  /// Values of a single variable admitted by the interval and residue.
  std::vector<std::int64_t> admissible_values() const;
  /// distinct_mod present with count > distinct_mod.
  bool infeasible() const { return distinct_mod && count > *distinct_mod; }
};

/// Signed power sums, one component per exponent of the owning ExponentSet.
struct PowerSumVector {
  std::vector<BigInt> components;

  std::size_t size() const { return components.size(); }
  friend bool operator==(const PowerSumVector&, const PowerSumVector&) = default;
  friend auto operator<=>(const PowerSumVector& a, const PowerSumVector& b) {
    return a.components <=> b.components;
  }
};

struct SystemSpec {
  ExponentSet exponents;
  std::vector<VariableBlock> blocks;
  std::optional<PowerSumVector> target;

  /// Throws InvalidArgument when an invariant of the spec is violated.
  void validate() const;
  int total_variables() const;
  PowerSumVector target_or_zero() const;
};

/// Representation function: power-sum vector -> number of assignments.
struct RepTable {
  std::map<PowerSumVector, Count> entries;
  SystemSpec spec;

  Count total() const;
  std::size_t support_size() const { return entries.size(); }
  Count at(const PowerSumVector& v) const;
};

enum class TablePath { kAuto, kSparse, kDense };

/// Engine tuning. None of these change results, only how they are computed.
struct EngineOptions {
  /// Predicted table bytes allowed before BudgetExceeded.
  std::uint64_t budget_bytes = std::uint64_t{4} << 30;
  unsigned threads = 1;
  TablePath path = TablePath::kAuto;
};

/// (coeff_j * x^j)_{j in E}, exact.
PowerSumVector power_sums(std::int64_t x, const ExponentSet& exponents,
                          const std::optional<std::vector<std::int64_t>>& coefficients = std::nullopt);

RepTable build_rep_table(const SystemSpec& spec, const EngineOptions& options = {});

/// J = sum_v r_s(v)^2, the number of solutions of sum x_i^j = sum y_i^j
/// (j in E) with all 2s variables in `interval`.
Count mean_value(const ExponentSet& exponents, int s, Interval interval,
                 const EngineOptions& options = {});

/// J_{s,k}(X) with E = {1..k} on [1, X], computed on the affinely normalized
/// system (variables mapped to a symmetric progression), which is much
/// cheaper for large X. Equal to mean_value(full(k), s, {1, X}).
Count vinogradov_mean_value(int k, int s, std::int64_t X, const EngineOptions& options = {});

/// Exact count via meet-in-the-middle over two halves of the blocks.
Count constrained_count(const SystemSpec& spec, const EngineOptions& options = {});

/// Independent oracle: nested enumeration of every assignment.
Count brute_force_count(const SystemSpec& spec);

/// Product over blocks of the number of admissible assignments of the block.
Count admissible_assignments(const SystemSpec& spec);

/// Solutions of sum (x_i^l - y_i^l) = 0 for l in {1..k}\{j} and
/// sum (x_i^j - y_i^j) = h.
Count difference_count(int k, int s, Interval interval, int j, std::int64_t h,
                       const EngineOptions& options = {});

struct LowerBounds {
  Count diagonal;
  Rational cauchy_schwarz;
  std::size_t support_size = 0;
};

/// Diagonal length^s and Cauchy-Schwarz length^{2s} / support(r_s).
LowerBounds lower_bounds(const ExponentSet& exponents, int s, Interval interval,
                         const EngineOptions& options = {});

/// Sums a table over its last coordinate. The result is attached to a spec
/// whose exponent set drops the largest exponent.
RepTable marginalize_last(const RepTable& table);

/// Spec of s identical unit variables of the given sign on an interval.
SystemSpec uniform_spec(const ExponentSet& exponents, int s, Interval interval, int sign = 1);
/// Spec of the paired system sum x^j = sum y^j (s variables per side).
SystemSpec paired_spec(const ExponentSet& exponents, int s, Interval interval);

}  // namespace vinolab
