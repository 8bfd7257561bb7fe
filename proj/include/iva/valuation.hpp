#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "iva/matroid.hpp"
#include "iva/types.hpp"

namespace iva {

struct ValuationMetadata {
  bool claimed_sos = false;
  std::optional<int> claimed_d;
  bool monotone = true;
};

/// Monotone map from signal profiles to a non-negative value, accessed by
/// value queries only. Evaluations are validated: a negative or non-finite
/// result rejects the oracle with OracleError.
class ValuationOracle {
 public:
  using Evaluator = std::function<double(const SignalProfile&)>;

  ValuationOracle(int bidder, Evaluator evaluator, ValuationMetadata metadata = {});

  int bidder() const { return bidder_; }
  const ValuationMetadata& metadata() const { return metadata_; }
  double operator()(const SignalProfile& s) const;

 private:
  int bidder_ = 0;
  Evaluator evaluator_;
  ValuationMetadata metadata_;
};

/// How to suppress a coordinate when computing shadow values. zero-out is the
/// paper's v_j(s_{-i}, 0_i); infimum-over-grid supports non-monotone
/// valuations by minimizing over a supplied finite list of own-signal values.
struct ShadowOperator {
  enum class Mode { kZeroOut, kInfimumOverGrid };
  Mode mode = Mode::kZeroOut;
  std::vector<double> grid;  // candidate s_i values, infimum mode only

  static ShadowOperator zero_out() { return {}; }
  static ShadowOperator infimum_over(std::vector<double> grid_values);
};

/// v evaluated at s with coordinate i replaced per the operator.
double shadow_value(const ValuationOracle& v, const SignalProfile& s, int i,
                    const ShadowOperator& op = {});

struct SosCounterexample {
  int bidder = 0;           // coordinate i that was incremented
  SignalProfile low;        // profile with the smaller s_{-i}
  SignalProfile high;       // dominating profile, same s_i
  double low_gain = 0;      // v(s_i+delta, low_{-i}) - v(low)
  double high_gain = 0;     // v(s_i+delta, high_{-i}) - v(high)
};

struct SosCheck {
  bool pass = true;
  std::optional<SosCounterexample> counterexample;
  long long pairs_checked = 0;
};

/// Verifies the submodular-over-signals inequality on every comparable pair
/// of grid profiles sharing coordinate i, for every i: the marginal gain of
/// raising s_i by delta must not increase when the other signals rise.
/// The caller picks grid and delta so that bumped profiles stay inside the
/// oracle's domain (relevant for table oracles). First violation in
/// (i, grid-index, grid-index) lexicographic order is reported.
SosCheck check_sos(const ValuationOracle& v, const std::vector<SignalProfile>& grid, double delta,
                   double tolerance = 1e-9);

struct SelfBoundingCheck {
  bool pass = true;
  double slack = 0;  // v(s) - sum of marginals; negative = violation
};

/// Verifies sum_i (v(s) - v(s_{-i}, 0_i)) <= v(s) within tolerance.
SelfBoundingCheck check_self_bounding(const ValuationOracle& v, const SignalProfile& s,
                                      const ShadowOperator& op = {}, double tolerance = 1e-9);

/// |{j : v(s_{-j}, 0_j) < v(s)}| with strict comparison at tolerance 1e-12.
int criticality_at(const ValuationOracle& v, const SignalProfile& s, const ShadowOperator& op = {});

/// Concrete valuation families. Only the parameters of the tagged family are
/// read by make_family.
struct ValuationFamilySpec {
  enum class Family {
    kAffineResale,         // v_i(s) = own_coef[i] s_i + sum_j cross_coef[i][j] s_j
    kMineralAverage,       // v_i(s) = (1/n) sum_j s_j
    kMaxSignal,            // v_i(s) = max_j s_j
    kWeightedMatroidRank,  // v_i(s) = max weight of an independent set under w_j s_j
    kNeighborhoodGraph,    // v_i(s) = aggregate of s_j over i's neighbors
    kCustomTable,          // exact lookup on a declared lattice, no interpolation
  };
  enum class Aggregate { kSum, kMax };

  Family family = Family::kMaxSignal;

  // affine-resale
  std::vector<double> own_coef;
  std::vector<std::vector<double>> cross_coef;

  // weighted-matroid-rank
  std::shared_ptr<const Matroid> matroid;
  std::vector<double> weights;

  // neighborhood-graph
  std::vector<std::vector<int>> neighbors;
  Aggregate aggregate = Aggregate::kSum;

  // custom-table
  std::vector<std::vector<double>> table_axes;          // per-bidder axis values
  std::map<int, std::vector<double>> table_values;      // bidder -> row-major values
  std::optional<ValuationMetadata> table_metadata;

  static ValuationFamilySpec affine_resale(std::vector<double> own,
                                           std::vector<std::vector<double>> cross);
  static ValuationFamilySpec mineral_average();
  static ValuationFamilySpec max_signal();
  static ValuationFamilySpec weighted_matroid_rank(std::shared_ptr<const Matroid> m,
                                                   std::vector<double> w);
  static ValuationFamilySpec neighborhood_graph(std::vector<std::vector<int>> neighbors,
                                                Aggregate aggregate);
  static ValuationFamilySpec custom_table(std::vector<std::vector<double>> axes,
                                          std::map<int, std::vector<double>> values,
                                          std::optional<ValuationMetadata> metadata = {});

  std::string family_name() const;
};

/// Instantiates n oracles for the family, with class metadata set per family.
std::vector<ValuationOracle> make_family(const ValuationFamilySpec& spec, int n);

/// Lattice of profiles from per-bidder axis values, in lexicographic order
/// (axis 0 slowest).
std::vector<SignalProfile> make_grid(const std::vector<std::vector<double>>& axes);

/// Same axis values for every one of n bidders.
std::vector<SignalProfile> make_uniform_grid(int n, const std::vector<double>& axis);

}  // namespace iva
