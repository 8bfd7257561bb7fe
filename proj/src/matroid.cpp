#include "iva/matroid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "iva/rng.hpp"

namespace iva {

namespace {
std::uint64_t bit(int e) { return std::uint64_t{1} << e; }
}  // namespace

Matroid::Matroid(int n) : n_(n) {
  require(n >= 0 && n <= 64, "matroid ground set size must be in [0, 64]");
}

bool Matroid::independent(const std::vector<int>& elements) const {
  return independent(to_mask(elements, n_));
}

std::uint64_t to_mask(const std::vector<int>& elements, int n) {
  std::uint64_t mask = 0;
  for (int e : elements) {
    require(e >= 0 && e < n, "element out of range");
    require((mask & bit(e)) == 0, "duplicate element in subset");
    mask |= bit(e);
  }
  return mask;
}

std::vector<int> from_mask(std::uint64_t mask) {
  std::vector<int> elements;
  while (mask) {
    int e = std::countr_zero(mask);
    elements.push_back(e);
    mask &= mask - 1;
  }
  return elements;
}

// ---------------------------------------------------------------------------
// Matroid kinds

UniformMatroid::UniformMatroid(int n, int k) : Matroid(n), k_(k) {
  require(k >= 0, "uniform matroid rank bound must be non-negative");
}

bool UniformMatroid::independent(std::uint64_t subset) const {
  return std::popcount(subset) <= k_;
}

std::string UniformMatroid::describe() const {
  std::ostringstream s;
  s << "uniform(n=" << n_ << ",k=" << k_ << ")";
  return s.str();
}

PartitionMatroid::PartitionMatroid(std::vector<std::vector<int>> blocks,
                                   std::vector<int> capacities)
    : Matroid([&] {
        int n = 0;
        for (const auto& b : blocks) n += static_cast<int>(b.size());
        return n;
      }()),
      capacities_(std::move(capacities)) {
  require(blocks.size() == capacities_.size(), "one capacity per block");
  std::uint64_t seen = 0;
  for (const auto& b : blocks) {
    std::uint64_t mask = to_mask(b, n_);
    require((seen & mask) == 0, "blocks must be disjoint");
    seen |= mask;
    block_masks_.push_back(mask);
  }
  require(n_ == 0 || seen == (n_ == 64 ? ~std::uint64_t{0} : bit(n_) - 1),
          "blocks must cover the ground set");
  for (int c : capacities_) require(c >= 0, "capacities must be non-negative");
}

bool PartitionMatroid::independent(std::uint64_t subset) const {
  for (std::size_t b = 0; b < block_masks_.size(); ++b) {
    if (std::popcount(subset & block_masks_[b]) > capacities_[b]) return false;
  }
  return true;
}

std::string PartitionMatroid::describe() const {
  std::ostringstream s;
  s << "partition(n=" << n_ << ",blocks=" << block_masks_.size() << ")";
  return s.str();
}

GraphicMatroid::GraphicMatroid(int vertices, std::vector<std::pair<int, int>> edges)
    : Matroid(static_cast<int>(edges.size())), vertices_(vertices), edges_(std::move(edges)) {
  require(vertices >= 0, "vertex count must be non-negative");
  for (const auto& [u, w] : edges_) {
    require(u >= 0 && u < vertices_ && w >= 0 && w < vertices_, "edge endpoint out of range");
  }
}

bool GraphicMatroid::independent(std::uint64_t subset) const {
  // union-find cycle detection over the selected edges
  std::vector<int> parent(vertices_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::uint64_t rest = subset;
  while (rest) {
    int e = std::countr_zero(rest);
    rest &= rest - 1;
    auto [u, w] = edges_[static_cast<std::size_t>(e)];
    int ru = find(u), rw = find(w);
    if (ru == rw) return false;
    parent[ru] = rw;
  }
  return true;
}

std::string GraphicMatroid::describe() const {
  std::ostringstream s;
  s << "graphic(vertices=" << vertices_ << ",edges=" << edges_.size() << ")";
  return s.str();
}

struct LinearMatroid::Impl {
  int n = 0;
  std::vector<std::vector<boost::multiprecision::cpp_rational>> rows;
};

LinearMatroid::LinearMatroid(int n, std::vector<std::vector<RationalEntry>> rows)
    : Matroid(n) {
  auto impl = std::make_shared<Impl>();
  impl->n = n;
  for (const auto& row : rows) {
    require(static_cast<int>(row.size()) == n, "linear matroid rows must have n entries");
    std::vector<boost::multiprecision::cpp_rational> converted;
    converted.reserve(row.size());
    for (const auto& entry : row) {
      require(entry.den != 0, "rational entry denominator must be nonzero");
      converted.emplace_back(boost::multiprecision::cpp_int(entry.num),
                             boost::multiprecision::cpp_int(entry.den));
    }
    impl->rows.push_back(std::move(converted));
  }
  impl_ = std::move(impl);
}

bool LinearMatroid::independent(std::uint64_t subset) const {
  using Rational = boost::multiprecision::cpp_rational;
  const auto cols = from_mask(subset);
  const int k = static_cast<int>(cols.size());
  if (k == 0) return true;
  const int r = static_cast<int>(impl_->rows.size());
  if (k > r) return false;
  // exact Gaussian elimination on the selected columns
  std::vector<std::vector<Rational>> mat(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    mat[i].reserve(cols.size());
    for (int c : cols) mat[i].push_back(impl_->rows[i][static_cast<std::size_t>(c)]);
  }
  int row = 0;
  for (int col = 0; col < k; ++col) {
    int pivot = -1;
    for (int i = row; i < r; ++i) {
      if (mat[i][col] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) return false;  // column dependent on earlier ones
    std::swap(mat[row], mat[pivot]);
    for (int i = row + 1; i < r; ++i) {
      if (mat[i][col] == 0) continue;
      Rational factor = mat[i][col] / mat[row][col];
      for (int j = col; j < k; ++j) mat[i][j] -= factor * mat[row][j];
    }
    ++row;
  }
  return true;
}

std::string LinearMatroid::describe() const {
  std::ostringstream s;
  s << "linear(n=" << impl_->n << ",rows=" << impl_->rows.size() << ")";
  return s.str();
}

ExplicitMatroid::ExplicitMatroid(int n, const std::vector<std::vector<int>>& independent_sets)
    : ExplicitMatroid(n, [&] {
        std::vector<std::uint64_t> masks;
        masks.reserve(independent_sets.size());
        for (const auto& set : independent_sets) masks.push_back(to_mask(set, n));
        return masks;
      }()) {}

ExplicitMatroid::ExplicitMatroid(int n, std::vector<std::uint64_t> independent_masks)
    : Matroid(n) {
  require(n <= 20, "explicit matroids are limited to n <= 20");
  independent_.assign(std::size_t{1} << n, false);
  for (std::uint64_t mask : independent_masks) {
    require(mask < independent_.size(), "independent set out of range");
    independent_[mask] = true;
  }
  verify_axioms();
}

bool ExplicitMatroid::independent(std::uint64_t subset) const {
  if (subset >= independent_.size()) return false;
  return independent_[subset];
}

void ExplicitMatroid::verify_axioms() const {
  if (!independent_[0]) throw MatroidAxiomError("empty set must be independent");
  const std::uint64_t limit = independent_.size();
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    if (!independent_[mask]) continue;
    // downward closedness: removing any single element stays independent
    std::uint64_t rest = mask;
    while (rest) {
      std::uint64_t low = rest & (~rest + 1);
      if (!independent_[mask ^ low]) {
        throw MatroidAxiomError("independent-set family is not downward closed");
      }
      rest ^= low;
    }
  }
  for (std::uint64_t a = 0; a < limit; ++a) {
    if (!independent_[a]) continue;
    for (std::uint64_t b = 0; b < limit; ++b) {
      if (!independent_[b] || std::popcount(a) >= std::popcount(b)) continue;
      bool extends = false;
      std::uint64_t candidates = b & ~a;
      while (candidates) {
        std::uint64_t low = candidates & (~candidates + 1);
        if (independent_[a | low]) {
          extends = true;
          break;
        }
        candidates ^= low;
      }
      if (!extends) throw MatroidAxiomError("exchange property violated");
    }
  }
}

std::string ExplicitMatroid::describe() const {
  std::ostringstream s;
  s << "explicit(n=" << n_ << ")";
  return s.str();
}

ExplicitMatroid materialize(const Matroid& m) {
  require(m.size() <= 20, "materialize is limited to n <= 20");
  std::vector<std::uint64_t> masks;
  const std::uint64_t limit = std::uint64_t{1} << m.size();
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    if (m.independent(mask)) masks.push_back(mask);
  }
  return ExplicitMatroid(m.size(), std::move(masks));
}

// ---------------------------------------------------------------------------
// Rank and greedy

namespace {
int greedy_rank_scan(const Matroid& m, std::uint64_t subset, bool ascending) {
  std::uint64_t current = 0;
  const auto elements = from_mask(subset);
  auto try_add = [&](int e) {
    if (m.independent(current | bit(e))) current |= bit(e);
  };
  if (ascending) {
    for (int e : elements) try_add(e);
  } else {
    for (auto it = elements.rbegin(); it != elements.rend(); ++it) try_add(*it);
  }
  return std::popcount(current);
}
}  // namespace

int rank(const Matroid& m, std::uint64_t subset) {
  int forward = greedy_rank_scan(m, subset, true);
  int backward = greedy_rank_scan(m, subset, false);
  if (forward != backward) {
    throw MatroidAxiomError("corrupt independence oracle: maximal sets of different size");
  }
  return forward;
}

int rank(const Matroid& m, const std::vector<int>& elements) {
  return rank(m, to_mask(elements, m.size()));
}

int weight_compare(double a, double b) {
  if (a > b + kWeightBand) return 1;
  if (b > a + kWeightBand) return -1;
  return 0;
}

std::vector<int> weight_scan_order(const WeightFunction& w) {
  std::vector<int> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (w[a] != w[b]) return w[a] > w[b];
    return a < b;
  });
  // regroup near-ties (within the band) and settle them by index, so float
  // noise cannot flip the scan order
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start + 1;
    while (end < order.size() && w[order[end - 1]] - w[order[end]] <= kWeightBand) ++end;
    std::sort(order.begin() + start, order.begin() + end);
    start = end;
  }
  return order;
}

bool GreedyResult::contains(int element) const {
  return std::find(selected.begin(), selected.end(), element) != selected.end();
}

GreedyResult greedy_max_weight(const Matroid& m, const WeightFunction& w) {
  require(static_cast<int>(w.size()) == m.size(), "weight vector must cover the ground set");
  for (double x : w) {
    require(std::isfinite(x) && x >= 0, "weights must be finite and non-negative");
  }
  GreedyResult result;
  result.scan_order = weight_scan_order(w);
  std::uint64_t current = 0;
  for (int e : result.scan_order) {
    if (m.independent(current | bit(e))) {
      current |= bit(e);
      result.selected.push_back(e);
      result.total_weight += w[static_cast<std::size_t>(e)];
    }
  }
  return result;
}

namespace {
// Elements scanned strictly before `element` when its own weight is v: higher
// weight, or tied (within the band) with lower index.
std::uint64_t prefix_before(const WeightFunction& w, int element, double v) {
  std::uint64_t mask = 0;
  for (int j = 0; j < static_cast<int>(w.size()); ++j) {
    if (j == element) continue;
    int cmp = weight_compare(w[static_cast<std::size_t>(j)], v);
    if (cmp > 0 || (cmp == 0 && j < element)) mask |= bit(j);
  }
  return mask;
}

bool spanned_by(const Matroid& m, int element, std::uint64_t prefix) {
  return rank(m, prefix | bit(element)) == rank(m, prefix);
}
}  // namespace

CriticalWeight critical_weight(const Matroid& m, int element, const WeightFunction& w) {
  require(element >= 0 && element < m.size(), "element out of range");
  require(static_cast<int>(w.size()) == m.size(), "weight vector must cover the ground set");
  CriticalWeight result;
  if (!m.independent(bit(element))) {
    // a loop is never selected at any weight
    result.theta = std::numeric_limits<double>::infinity();
    result.selected_at_theta = false;
    return result;
  }
  // scan the other elements by decreasing weight; theta is the weight of the
  // element whose inclusion first puts `element` in the span of the prefix
  WeightFunction others = w;
  others[static_cast<std::size_t>(element)] = 0;
  std::vector<int> order = weight_scan_order(others);
  std::uint64_t prefix = 0;
  double theta = 0;
  bool spanned = false;
  for (int e : order) {
    if (e == element) continue;
    prefix |= bit(e);
    if (spanned_by(m, element, prefix)) {
      theta = w[static_cast<std::size_t>(e)];
      spanned = true;
      break;
    }
  }
  if (!spanned) {
    result.theta = 0;
    result.selected_at_theta = true;  // independent of everything, selected even at 0
    return result;
  }
  result.theta = theta;
  result.selected_at_theta = !spanned_by(m, element, prefix_before(w, element, theta));
  return result;
}

bool greedy_selects_at(const Matroid& m, int element, const WeightFunction& w, double own_weight) {
  if (!m.independent(bit(element))) return false;
  return !spanned_by(m, element, prefix_before(w, element, own_weight));
}

// ---------------------------------------------------------------------------
// Matroid partition

PartitionConditionResult verify_partition_condition(const Matroid& m, const std::vector<int>& S,
                                                    int t,
                                                    const PartitionConditionOptions& options) {
  require(t >= 1, "partition slot count must be >= 1");
  std::vector<int> sorted = S;
  std::sort(sorted.begin(), sorted.end());
  to_mask(sorted, m.size());  // validates range/duplicates
  const int k = static_cast<int>(sorted.size());
  PartitionConditionResult result;

  auto check_mask = [&](std::uint64_t selector) -> bool {
    std::uint64_t subset = 0;
    for (int idx = 0; idx < k; ++idx) {
      if (selector & bit(idx)) subset |= bit(sorted[static_cast<std::size_t>(idx)]);
    }
    return std::popcount(subset) <= t * rank(m, subset);
  };

  if (k <= options.exhaustive_limit) {
    const std::uint64_t limit = k == 0 ? 1 : (std::uint64_t{1} << k);
    for (std::uint64_t selector = 1; selector < limit; ++selector) {
      if (!check_mask(selector)) {
        result.pass = false;
        for (int idx = 0; idx < k; ++idx) {
          if (selector & bit(idx)) {
            result.violating_subset.push_back(sorted[static_cast<std::size_t>(idx)]);
          }
        }
        return result;
      }
    }
    return result;
  }

  result.exhaustive = false;
  RandomStream rng(options.seed);
  // always probe the full set and singletons, then random subsets
  std::vector<std::uint64_t> selectors;
  selectors.push_back(k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1);
  for (int idx = 0; idx < k; ++idx) selectors.push_back(bit(idx));
  for (int i = 0; i < options.samples; ++i) selectors.push_back(rng.next_u64() & selectors[0]);
  for (std::uint64_t selector : selectors) {
    if (selector == 0) continue;
    if (!check_mask(selector)) {
      result.pass = false;
      for (int idx = 0; idx < k; ++idx) {
        if (selector & bit(idx)) {
          result.violating_subset.push_back(sorted[static_cast<std::size_t>(idx)]);
        }
      }
      return result;
    }
  }
  return result;
}

int IndependentSetPartition::part_of(int element) const {
  for (std::size_t p = 0; p < parts.size(); ++p) {
    if (std::find(parts[p].begin(), parts[p].end(), element) != parts[p].end()) {
      return static_cast<int>(p);
    }
  }
  return -1;
}

namespace {
// One matroid-union augmentation: find a home for `e` via BFS over the
// exchange graph. Shortest-first search keeps every part independent after
// the chain of displacements.
bool augment(const Matroid& m, std::vector<std::uint64_t>& parts, std::vector<int>& part_of,
             int e) {
  const int t = static_cast<int>(parts.size());
  std::vector<int> parent(static_cast<std::size_t>(m.size()), -1);
  std::vector<bool> visited(static_cast<std::size_t>(m.size()), false);
  visited[static_cast<std::size_t>(e)] = true;
  std::deque<int> queue{e};

  int terminal = -1, terminal_part = -1;
  while (!queue.empty() && terminal < 0) {
    int x = queue.front();
    queue.pop_front();
    for (int r = 0; r < t && terminal < 0; ++r) {
      std::uint64_t with_x = parts[static_cast<std::size_t>(r)] | bit(x);
      if (part_of[static_cast<std::size_t>(x)] == r) continue;
      if (m.independent(with_x)) {
        terminal = x;
        terminal_part = r;
        break;
      }
      // displacement candidates in ascending element order
      std::uint64_t members = parts[static_cast<std::size_t>(r)];
      while (members) {
        int f = std::countr_zero(members);
        members &= members - 1;
        if (visited[static_cast<std::size_t>(f)]) continue;
        if (m.independent(with_x ^ bit(f))) {
          visited[static_cast<std::size_t>(f)] = true;
          parent[static_cast<std::size_t>(f)] = x;
          queue.push_back(f);
        }
      }
    }
  }
  if (terminal < 0) return false;

  // unwind: terminal enters terminal_part, each predecessor takes the slot
  // its successor vacated
  int cur = terminal, dest = terminal_part;
  while (true) {
    int old_part = part_of[static_cast<std::size_t>(cur)];
    parts[static_cast<std::size_t>(dest)] |= bit(cur);
    part_of[static_cast<std::size_t>(cur)] = dest;
    if (cur == e) break;
    parts[static_cast<std::size_t>(old_part)] &= ~bit(cur);
    dest = old_part;
    cur = parent[static_cast<std::size_t>(cur)];
  }
  return true;
}
}  // namespace

IndependentSetPartition partition_into(const Matroid& m, const std::vector<int>& S, int t) {
  require(t >= 1, "partition slot count must be >= 1");
  std::vector<int> sorted = S;
  std::sort(sorted.begin(), sorted.end());
  to_mask(sorted, m.size());

  std::vector<std::uint64_t> parts(static_cast<std::size_t>(t), 0);
  std::vector<int> part_of(static_cast<std::size_t>(m.size()), -1);
  for (int e : sorted) {
    if (!augment(m, parts, part_of, e)) {
      auto condition = verify_partition_condition(m, sorted, t);
      if (!condition.pass) throw PartitionInfeasible(condition.violating_subset, t);
      // the oracle let the condition pass but blocked the augmentation
      throw MatroidAxiomError("augmentation failed although the partition condition holds");
    }
  }

  IndependentSetPartition result;
  std::uint64_t seen = 0;
  for (std::uint64_t mask : parts) {
    if (mask == 0) continue;
    if (!m.independent(mask) || (seen & mask) != 0) {
      throw MatroidAxiomError("partition invariant broken by the independence oracle");
    }
    seen |= mask;
    result.parts.push_back(from_mask(mask));
  }
  if (seen != to_mask(sorted, m.size())) {
    throw MatroidAxiomError("partition does not cover the input set");
  }
  return result;
}

}  // namespace iva
