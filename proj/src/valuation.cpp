#include "iva/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace iva {

ValuationOracle::ValuationOracle(int bidder, Evaluator evaluator, ValuationMetadata metadata)
    : bidder_(bidder), evaluator_(std::move(evaluator)), metadata_(metadata) {
  require(static_cast<bool>(evaluator_), "valuation oracle needs an evaluator");
}

double ValuationOracle::operator()(const SignalProfile& s) const {
  double value = evaluator_(s);
  if (!std::isfinite(value) || value < 0) {
    std::ostringstream msg;
    msg << "oracle for bidder " << bidder_ << " returned " << value
        << "; values must be finite and non-negative";
    throw OracleError(msg.str());
  }
  return value;
}

ShadowOperator ShadowOperator::infimum_over(std::vector<double> grid_values) {
  ShadowOperator op;
  op.mode = Mode::kInfimumOverGrid;
  op.grid = std::move(grid_values);
  return op;
}

double shadow_value(const ValuationOracle& v, const SignalProfile& s, int i,
                    const ShadowOperator& op) {
  require(i >= 0 && i < s.size(), "shadow coordinate out of range");
  if (op.mode == ShadowOperator::Mode::kZeroOut) {
    return v(s.with(i, 0.0));
  }
  require(!op.grid.empty(), "infimum shadow operator needs a non-empty grid");
  double best = std::numeric_limits<double>::infinity();
  for (double value : op.grid) best = std::min(best, v(s.with(i, value)));
  return best;
}

SosCheck check_sos(const ValuationOracle& v, const std::vector<SignalProfile>& grid, double delta,
                   double tolerance) {
  require(!grid.empty(), "SOS check needs a non-empty grid");
  require(delta > 0, "SOS check needs a positive delta");
  const int n = grid.front().size();
  for (const auto& s : grid) require(s.size() == n, "grid profiles must share a dimension");

  // memoize base and bumped values; the pair sweep is then pure arithmetic
  const std::size_t g = grid.size();
  std::vector<double> base(g);
  std::vector<std::vector<double>> bumped(g, std::vector<double>(static_cast<std::size_t>(n)));
  for (std::size_t a = 0; a < g; ++a) {
    base[a] = v(grid[a]);
    for (int i = 0; i < n; ++i) {
      bumped[a][static_cast<std::size_t>(i)] = v(grid[a].with(i, grid[a][i] + delta));
    }
  }

  auto dominated_rest = [&](const SignalProfile& lo, const SignalProfile& hi, int skip) {
    for (int j = 0; j < n; ++j) {
      if (j == skip) continue;
      if (lo[j] > hi[j]) return false;
    }
    return true;
  };

  SosCheck result;
  for (int i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < g; ++a) {
      for (std::size_t b = 0; b < g; ++b) {
        if (a == b) continue;
        if (grid[a][i] != grid[b][i]) continue;
        if (!dominated_rest(grid[a], grid[b], i)) continue;
        ++result.pairs_checked;
        double low_gain = bumped[a][static_cast<std::size_t>(i)] - base[a];
        double high_gain = bumped[b][static_cast<std::size_t>(i)] - base[b];
        if (low_gain < high_gain - tolerance) {
          result.pass = false;
          result.counterexample =
              SosCounterexample{i, grid[a], grid[b], low_gain, high_gain};
          return result;
        }
      }
    }
  }
  return result;
}

SelfBoundingCheck check_self_bounding(const ValuationOracle& v, const SignalProfile& s,
                                      const ShadowOperator& op, double tolerance) {
  const double value = v(s);
  double marginals = 0;
  for (int i = 0; i < s.size(); ++i) marginals += value - shadow_value(v, s, i, op);
  SelfBoundingCheck result;
  result.slack = value - marginals;
  result.pass = result.slack >= -tolerance;
  return result;
}

int criticality_at(const ValuationOracle& v, const SignalProfile& s, const ShadowOperator& op) {
  constexpr double kStrict = 1e-12;
  const double value = v(s);
  int critical = 0;
  for (int j = 0; j < s.size(); ++j) {
    if (shadow_value(v, s, j, op) < value - kStrict) ++critical;
  }
  return critical;
}

// ---------------------------------------------------------------------------
// Families

ValuationFamilySpec ValuationFamilySpec::affine_resale(std::vector<double> own,
                                                       std::vector<std::vector<double>> cross) {
  ValuationFamilySpec spec;
  spec.family = Family::kAffineResale;
  spec.own_coef = std::move(own);
  spec.cross_coef = std::move(cross);
  return spec;
}

ValuationFamilySpec ValuationFamilySpec::mineral_average() {
  ValuationFamilySpec spec;
  spec.family = Family::kMineralAverage;
  return spec;
}

ValuationFamilySpec ValuationFamilySpec::max_signal() {
  ValuationFamilySpec spec;
  spec.family = Family::kMaxSignal;
  return spec;
}

ValuationFamilySpec ValuationFamilySpec::weighted_matroid_rank(std::shared_ptr<const Matroid> m,
                                                               std::vector<double> w) {
  ValuationFamilySpec spec;
  spec.family = Family::kWeightedMatroidRank;
  spec.matroid = std::move(m);
  spec.weights = std::move(w);
  return spec;
}

ValuationFamilySpec ValuationFamilySpec::neighborhood_graph(std::vector<std::vector<int>> neighbors,
                                                            Aggregate aggregate) {
  ValuationFamilySpec spec;
  spec.family = Family::kNeighborhoodGraph;
  spec.neighbors = std::move(neighbors);
  spec.aggregate = aggregate;
  return spec;
}

ValuationFamilySpec ValuationFamilySpec::custom_table(std::vector<std::vector<double>> axes,
                                                      std::map<int, std::vector<double>> values,
                                                      std::optional<ValuationMetadata> metadata) {
  ValuationFamilySpec spec;
  spec.family = Family::kCustomTable;
  spec.table_axes = std::move(axes);
  spec.table_values = std::move(values);
  spec.table_metadata = metadata;
  return spec;
}

std::string ValuationFamilySpec::family_name() const {
  switch (family) {
    case Family::kAffineResale: return "affine-resale";
    case Family::kMineralAverage: return "mineral-average";
    case Family::kMaxSignal: return "max-signal";
    case Family::kWeightedMatroidRank: return "weighted-matroid-rank";
    case Family::kNeighborhoodGraph: return "neighborhood-graph";
    case Family::kCustomTable: return "custom-table";
  }
  return "unknown";
}

namespace {
void check_profile_size(const SignalProfile& s, int n) {
  if (s.size() != n) throw OracleError("signal profile has the wrong dimension");
}

std::vector<ValuationOracle> affine_resale_family(const ValuationFamilySpec& spec, int n) {
  require(static_cast<int>(spec.own_coef.size()) == n, "own_coef must have n entries");
  require(static_cast<int>(spec.cross_coef.size()) == n, "cross_coef must have n rows");
  for (const auto& row : spec.cross_coef) {
    require(static_cast<int>(row.size()) == n, "cross_coef rows must have n entries");
  }
  for (double a : spec.own_coef) {
    require(a >= 0, "affine-resale coefficients must be non-negative (claimed monotone)");
  }
  for (const auto& row : spec.cross_coef) {
    for (double b : row) {
      require(b >= 0, "affine-resale coefficients must be non-negative (claimed monotone)");
    }
  }
  std::vector<ValuationOracle> oracles;
  for (int i = 0; i < n; ++i) {
    std::vector<double> coef = spec.cross_coef[static_cast<std::size_t>(i)];
    coef[static_cast<std::size_t>(i)] = spec.own_coef[static_cast<std::size_t>(i)];
    int positive = static_cast<int>(std::count_if(coef.begin(), coef.end(),
                                                  [](double c) { return c > 0; }));
    ValuationMetadata meta;
    meta.claimed_sos = true;  // affine is modular
    meta.claimed_d = positive;
    oracles.emplace_back(i,
                         [coef, n](const SignalProfile& s) {
                           check_profile_size(s, n);
                           double total = 0;
                           for (int j = 0; j < n; ++j) {
                             total += coef[static_cast<std::size_t>(j)] * s[j];
                           }
                           return total;
                         },
                         meta);
  }
  return oracles;
}

std::vector<ValuationOracle> mineral_average_family(int n) {
  std::vector<ValuationOracle> oracles;
  for (int i = 0; i < n; ++i) {
    ValuationMetadata meta;
    meta.claimed_sos = true;
    meta.claimed_d = n;
    oracles.emplace_back(i,
                         [n](const SignalProfile& s) {
                           check_profile_size(s, n);
                           double total = 0;
                           for (int j = 0; j < n; ++j) total += s[j];
                           return total / n;
                         },
                         meta);
  }
  return oracles;
}

std::vector<ValuationOracle> max_signal_family(int n) {
  std::vector<ValuationOracle> oracles;
  for (int i = 0; i < n; ++i) {
    ValuationMetadata meta;
    meta.claimed_sos = true;
    meta.claimed_d = 1;
    oracles.emplace_back(i,
                         [n](const SignalProfile& s) {
                           check_profile_size(s, n);
                           double best = 0;
                           for (int j = 0; j < n; ++j) best = std::max(best, s[j]);
                           return best;
                         },
                         meta);
  }
  return oracles;
}

std::vector<ValuationOracle> weighted_matroid_rank_family(const ValuationFamilySpec& spec,
                                                          int n) {
  require(spec.matroid != nullptr, "weighted-matroid-rank needs a matroid");
  require(spec.matroid->size() == n, "matroid ground set must match the bidder count");
  require(static_cast<int>(spec.weights.size()) == n, "weights must have n entries");
  for (double w : spec.weights) {
    require(w >= 0, "weighted-matroid-rank weights must be non-negative");
  }
  auto matroid = spec.matroid;
  auto weights = spec.weights;
  const int d = rank(*matroid, matroid->size() == 64 ? ~std::uint64_t{0}
                                                     : (std::uint64_t{1} << matroid->size()) - 1);
  std::vector<ValuationOracle> oracles;
  for (int i = 0; i < n; ++i) {
    ValuationMetadata meta;
    meta.claimed_sos = true;
    meta.claimed_d = d;
    oracles.emplace_back(i,
                         [matroid, weights, n](const SignalProfile& s) {
                           check_profile_size(s, n);
                           WeightFunction scaled(static_cast<std::size_t>(n));
                           for (int j = 0; j < n; ++j) {
                             scaled[static_cast<std::size_t>(j)] =
                                 weights[static_cast<std::size_t>(j)] * s[j];
                           }
                           return greedy_max_weight(*matroid, scaled).total_weight;
                         },
                         meta);
  }
  return oracles;
}

std::vector<ValuationOracle> neighborhood_graph_family(const ValuationFamilySpec& spec, int n) {
  require(static_cast<int>(spec.neighbors.size()) == n, "adjacency must have n rows");
  for (const auto& row : spec.neighbors) {
    for (int j : row) require(j >= 0 && j < n, "neighbor index out of range");
  }
  std::vector<ValuationOracle> oracles;
  for (int i = 0; i < n; ++i) {
    auto hood = spec.neighbors[static_cast<std::size_t>(i)];
    const bool use_max = spec.aggregate == ValuationFamilySpec::Aggregate::kMax;
    ValuationMetadata meta;
    meta.claimed_sos = true;
    meta.claimed_d = static_cast<int>(hood.size());
    oracles.emplace_back(i,
                         [hood, use_max, n](const SignalProfile& s) {
                           check_profile_size(s, n);
                           double total = 0;
                           for (int j : hood) {
                             total = use_max ? std::max(total, s[j]) : total + s[j];
                           }
                           return total;
                         },
                         meta);
  }
  return oracles;
}

std::vector<ValuationOracle> custom_table_family(const ValuationFamilySpec& spec, int n) {
  require(static_cast<int>(spec.table_axes.size()) == n, "one axis per bidder");
  std::size_t cells = 1;
  for (const auto& axis : spec.table_axes) {
    require(!axis.empty(), "table axes must be non-empty");
    require(std::is_sorted(axis.begin(), axis.end()), "table axes must be sorted");
    cells *= axis.size();
  }
  auto axes = spec.table_axes;
  constexpr double kLookupTol = 1e-12;
  auto axis_index = [axes, kLookupTol](int j, double value) -> std::size_t {
    const auto& axis = axes[static_cast<std::size_t>(j)];
    for (std::size_t k = 0; k < axis.size(); ++k) {
      if (std::abs(axis[k] - value) <= kLookupTol) return k;
    }
    throw OracleError("custom-table query off the declared grid (no interpolation)");
  };
  std::vector<ValuationOracle> oracles;
  for (int i = 0; i < n; ++i) {
    auto it = spec.table_values.find(i);
    require(it != spec.table_values.end(), "custom-table is missing a bidder's values");
    require(it->second.size() == cells, "custom-table values must fill the lattice");
    auto values = it->second;
    ValuationMetadata meta = spec.table_metadata.value_or(ValuationMetadata{
        .claimed_sos = false, .claimed_d = std::nullopt, .monotone = false});
    oracles.emplace_back(i,
                         [axes, values, axis_index, n](const SignalProfile& s) {
                           check_profile_size(s, n);
                           std::size_t index = 0;
                           for (int j = 0; j < n; ++j) {
                             index = index * axes[static_cast<std::size_t>(j)].size() +
                                     axis_index(j, s[j]);
                           }
                           return values[index];
                         },
                         meta);
  }
  return oracles;
}
}  // namespace

std::vector<ValuationOracle> make_family(const ValuationFamilySpec& spec, int n) {
  require(n >= 1, "need at least one bidder");
  switch (spec.family) {
    case ValuationFamilySpec::Family::kAffineResale: return affine_resale_family(spec, n);
    case ValuationFamilySpec::Family::kMineralAverage: return mineral_average_family(n);
    case ValuationFamilySpec::Family::kMaxSignal: return max_signal_family(n);
    case ValuationFamilySpec::Family::kWeightedMatroidRank:
      return weighted_matroid_rank_family(spec, n);
    case ValuationFamilySpec::Family::kNeighborhoodGraph:
      return neighborhood_graph_family(spec, n);
    case ValuationFamilySpec::Family::kCustomTable: return custom_table_family(spec, n);
  }
  throw std::invalid_argument("unknown valuation family");
}

std::vector<SignalProfile> make_grid(const std::vector<std::vector<double>>& axes) {
  std::vector<SignalProfile> grid;
  std::size_t total = 1;
  for (const auto& axis : axes) {
    require(!axis.empty(), "grid axes must be non-empty");
    total *= axis.size();
  }
  std::vector<std::size_t> index(axes.size(), 0);
  for (std::size_t count = 0; count < total; ++count) {
    std::vector<double> point(axes.size());
    for (std::size_t j = 0; j < axes.size(); ++j) point[j] = axes[j][index[j]];
    grid.emplace_back(std::move(point));
    // odometer increment, last axis fastest
    for (std::size_t j = axes.size(); j-- > 0;) {
      if (++index[j] < axes[j].size()) break;
      index[j] = 0;
    }
  }
  return grid;
}

std::vector<SignalProfile> make_uniform_grid(int n, const std::vector<double>& axis) {
  return make_grid(std::vector<std::vector<double>>(static_cast<std::size_t>(n), axis));
}

}  // namespace iva
