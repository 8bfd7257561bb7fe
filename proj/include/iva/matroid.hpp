#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iva/types.hpp"

namespace iva {

/// Matroid over ground set {0, ..., n-1} (n <= 64), accessed through an
/// independence query on bitmask subsets. All derived quantities (rank, span,
/// greedy, partition) are computed from the query alone.
class Matroid {
 public:
  explicit Matroid(int n);
  virtual ~Matroid() = default;

  int size() const { return n_; }
  virtual bool independent(std::uint64_t subset) const = 0;
  bool independent(const std::vector<int>& elements) const;
  virtual std::string describe() const = 0;

 protected:
  int n_ = 0;
};

/// Subsets of size <= k.
class UniformMatroid final : public Matroid {
 public:
  UniformMatroid(int n, int k);
  using Matroid::independent;
  bool independent(std::uint64_t subset) const override;
  std::string describe() const override;

 private:
  int k_;
};

/// Blocks partition the ground set; a set is independent when it meets block
/// b in at most capacity[b] elements.
class PartitionMatroid final : public Matroid {
 public:
  PartitionMatroid(std::vector<std::vector<int>> blocks, std::vector<int> capacities);
  using Matroid::independent;
  bool independent(std::uint64_t subset) const override;
  std::string describe() const override;

 private:
  std::vector<std::uint64_t> block_masks_;
  std::vector<int> capacities_;
};

/// Elements are edges of a multigraph; independent = forest. Self-loops are
/// dependent singletons.
class GraphicMatroid final : public Matroid {
 public:
  GraphicMatroid(int vertices, std::vector<std::pair<int, int>> edges);
  using Matroid::independent;
  bool independent(std::uint64_t subset) const override;
  std::string describe() const override;
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

 private:
  int vertices_;
  std::vector<std::pair<int, int>> edges_;
};

/// Exact rational value p/q for linear-matroid entries.
struct RationalEntry {
  long long num = 0;
  long long den = 1;
};

/// Columns of a rational matrix; independence = linear independence, decided
/// by exact rational Gaussian elimination (no floating point).
class LinearMatroid final : public Matroid {
 public:
  /// rows[r][c] is the entry in row r of column c; every row must have n
  /// entries.
  LinearMatroid(int n, std::vector<std::vector<RationalEntry>> rows);
  using Matroid::independent;
  bool independent(std::uint64_t subset) const override;
  std::string describe() const override;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Explicitly listed family of independent sets. The constructor verifies the
/// matroid axioms exhaustively (non-empty with the empty set, downward
/// closed, exchange property) and throws MatroidAxiomError on violation.
class ExplicitMatroid final : public Matroid {
 public:
  ExplicitMatroid(int n, const std::vector<std::vector<int>>& independent_sets);
  ExplicitMatroid(int n, std::vector<std::uint64_t> independent_masks);
  using Matroid::independent;
  bool independent(std::uint64_t subset) const override;
  std::string describe() const override;

 private:
  void verify_axioms() const;
  std::vector<bool> independent_;  // indexed by mask
};

/// Materialize any matroid (n <= 20) as an ExplicitMatroid, re-verifying the
/// axioms along the way.
ExplicitMatroid materialize(const Matroid& m);

std::uint64_t to_mask(const std::vector<int>& elements, int n);
std::vector<int> from_mask(std::uint64_t mask);

/// Size of a maximal independent subset of S (greedy augmentation). Scans S
/// in both index directions and throws MatroidAxiomError if the two maximal
/// sets differ in size (an oracle contradicting the exchange property).
int rank(const Matroid& m, std::uint64_t subset);
int rank(const Matroid& m, const std::vector<int>& elements);

/// Comparison band under which two weights count as tied before the
/// lower-index rule applies.
inline constexpr double kWeightBand = 1e-12;

/// -1 / 0 / +1 for a below / tied-with / above b, with the kWeightBand band.
int weight_compare(double a, double b);

/// Elements ordered by non-increasing weight, ties (within kWeightBand)
/// broken in favor of lower index.
std::vector<int> weight_scan_order(const WeightFunction& w);

struct GreedyResult {
  std::vector<int> selected;    // in scan order
  std::vector<int> scan_order;  // full scan, for diagnostics
  double total_weight = 0;

  bool contains(int element) const;
};

/// Matroid greedy: scan by weight_scan_order, keep every element that
/// preserves independence. Returns a maximum-weight independent set of size
/// rank(M).
GreedyResult greedy_max_weight(const Matroid& m, const WeightFunction& w);

struct CriticalWeight {
  /// Infimum own-weight at which the element is selected by greedy
  /// (+infinity when the element is dependent on its own, e.g. a loop).
  double theta = 0;
  /// Whether greedy selects the element when its weight equals theta exactly
  /// (decided by the lower-index tie rule).
  bool selected_at_theta = false;
};

/// Exact threshold of greedy selection for `element` as its own weight
/// varies, all other weights fixed (w[element] is ignored). theta is the
/// weight of the scanned element whose inclusion first spans `element`.
CriticalWeight critical_weight(const Matroid& m, int element, const WeightFunction& w);

/// Greedy selection test at a specific own-weight, sharing critical_weight's
/// tie conventions.
bool greedy_selects_at(const Matroid& m, int element, const WeightFunction& w, double own_weight);

struct PartitionConditionResult {
  bool pass = true;
  std::vector<int> violating_subset;  // first violator, empty when pass
  bool exhaustive = true;
};

struct PartitionConditionOptions {
  int exhaustive_limit = 20;  // switch to sampling above this |S|
  int samples = 20000;
  std::uint64_t seed = 1;
};

/// Checks |S'| <= t * rank(S') for S' ⊆ S. Exhaustive for |S| <=
/// exhaustive_limit, visiting subsets in increasing-bitmask order over the
/// ascending elements of S (the first violator in that order is returned);
/// seeded random subsets beyond.
PartitionConditionResult verify_partition_condition(const Matroid& m, const std::vector<int>& S,
                                                    int t,
                                                    const PartitionConditionOptions& options = {});

struct IndependentSetPartition {
  std::vector<std::vector<int>> parts;  // nonempty, pairwise disjoint, each independent

  int part_of(int element) const;  // -1 when unassigned
};

/// Partition S into at most t independent sets via matroid-union augmenting
/// paths (BFS over the exchange graph; parts tried in ascending order,
/// displaced elements in ascending order, so the output is deterministic).
/// Throws PartitionInfeasible with a violating-subset certificate when no
/// augmenting path exists.
IndependentSetPartition partition_into(const Matroid& m, const std::vector<int>& S, int t);

}  // namespace iva
