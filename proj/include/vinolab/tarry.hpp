#pragma once

// Multigrade (Tarry) witnesses: h multisets of s positive integers sharing
// their power sums of degrees 1..k while their degree k+1 sums differ.

#include <cstdint>
#include <optional>
#include <vector>

#include "vinolab/common.hpp"
#include "vinolab/counting.hpp"

namespace vinolab {

struct MultigradeWitness {
  int k = 1;
  int s = 1;
  int h = 2;
  /// h nondecreasing tuples of length s.
  std::vector<Tuple> tuples;
  /// Shared power sums of degrees 1..k.
  PowerSumVector common_power_sums;
  /// Degree k+1 sums, one per tuple, pairwise distinct.
  std::vector<BigInt> top_sums;
};

/// Recomputes every power sum of the tuples. True iff the witness is valid.
bool verify_witness(const MultigradeWitness& w);

/// A class of s-multisets on [1, X] with equal sums of degrees 1..k and
/// at least h distinct degree k+1 sums.
struct MultigradeGroup {
  PowerSumVector common_power_sums;
  /// Distinct degree k+1 sums in increasing order.
  std::vector<BigInt> top_sums;
};

/// Every qualifying class, in increasing lexicographic order of the common
/// power sums. Throws TooLarge if X^s > 1e8.
std::vector<MultigradeGroup> multigrade_groups(int k, int h, int s, std::int64_t X,
                                               const EngineOptions& options = {});

/// Witness for one class: for each degree k+1 value its lexicographically
/// smallest nondecreasing tuple, keeping the h smallest tuples.
MultigradeWitness witness_for_group(int k, int h, int s, std::int64_t X, const MultigradeGroup& group);

/// Witness of the lexicographically smallest qualifying class, or nullopt.
/// The result is re-verified by direct arithmetic before it is returned.
std::optional<MultigradeWitness> multigrade_search(int k, int h, int s, std::int64_t X,
                                                   const EngineOptions& options = {});

struct TarryCriterion {
  Count J_k;
  Count J_k1;
  /// J_k > t * J_k1.
  bool holds = false;
  /// Present iff holds: a witness with h = t, from the same table.
  std::optional<MultigradeWitness> witness;
};

/// J_{s,k}(X) and J_{s,k+1}(X) from one degree k+1 table. When the count
/// inequality holds some class has more than t distinct top sums, so a
/// witness must exist; InvalidArgument is thrown if extraction fails.
TarryCriterion tarry_criterion(int k, int t, int s, std::int64_t X, const EngineOptions& options = {});

/// Smallest X in [1, X_max] at which tarry_criterion holds.
std::optional<std::int64_t> smallest_criterion_X(int k, int t, int s, std::int64_t X_max,
                                                 const EngineOptions& options = {});

}  // namespace vinolab
