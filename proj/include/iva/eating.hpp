#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "iva/types.hpp"
#include "iva/valuation.hpp"

namespace iva {

struct EatingResult {
  /// Stopping time solving sum_j (t + ln w(j))^+ = 1; empty when every weight
  /// is zero (nobody ever starts).
  std::optional<double> stopping_time;
  std::vector<double> shares;                       // y_j, zero for w(j) = 0
  std::vector<std::pair<double, int>> breakpoints;  // (start time, bidder), entrants only
};

/// Single eating process: bidder j starts at -ln(w(j)) and eats at unit speed
/// until the item is gone. Solved exactly by sorting start times and picking
/// the segment whose water level lands inside it.
EatingResult eat(const WeightFunction& w);

/// One piece of a bidder's share curve: on (v_lo, v_hi] the active set has
/// `active` eaters (the bidder plus active-1 others) and
/// y(v) = intercept + ((active-1)/active) * ln v.
struct CurveSegment {
  double v_lo = 0;
  double v_hi = 0;
  double intercept = 0;
  int active = 1;

  double share_at(double v) const;
};

/// Piecewise-closed-form description of v -> eat(w with w(i)=v)_i, with the
/// mechanism's normalization carried alongside. Continuous, non-decreasing,
/// zero below entry_value, and equal to 1 on the last segment.
class AllocationCurve {
 public:
  AllocationCurve(std::vector<CurveSegment> segments, double normalizer);

  const std::vector<CurveSegment>& segments() const { return segments_; }
  double normalizer() const { return normalizer_; }
  /// Lowest own-value at which the bidder starts eating (0 when alone).
  double entry_value() const;

  double share_at(double v) const;        // pre-normalized y_i(v)
  double probability_at(double v) const;  // share_at(v) / normalizer
  /// Closed-form integral of probability_at over [0, v].
  double probability_integral(double v) const;

 private:
  std::vector<CurveSegment> segments_;
  double normalizer_ = 4.0;
};

/// Share curve for `bidder` with all other weights fixed (w[bidder] is
/// ignored).
AllocationCurve allocation_curve(const WeightFunction& w, int bidder, double normalizer = 4.0);

/// Eq-pricing payment p = x(v) * v - integral_0^v x, evaluated in closed form
/// on the curve's segments. Always in [0, x(v) * v].
double payment_of(const AllocationCurve& curve, double reported_value);

struct EatingConfig {
  /// Share normalization constant; Mechanism 1 divides by 4. Exposed so the
  /// feasibility margin can be probed at smaller constants.
  double normalizer = 4.0;
  ShadowOperator shadow = {};
};

struct EatingOutcome {
  std::vector<double> allocations;       // x_i = own-process share / normalizer
  std::vector<double> payments;
  std::vector<WeightFunction> weights;   // w_i per bidder process
  std::vector<EatingResult> processes;
  double total_allocation = 0;
  /// False when sum x_i exceeds 1 (expected only for non-SOS inputs); the
  /// outcome is reported as-is rather than normalized silently.
  bool feasible = true;
  /// Whether every oracle claimed monotone SOS; the feasibility guarantee
  /// only covers that case, the mechanism runs either way.
  bool inputs_claimed_sos = true;

  double expected_welfare(const SignalProfile& s, const std::vector<ValuationOracle>& v) const;
};

/// Mechanism 1: per-bidder eating processes over (own real value, others'
/// shadow values), allocation = own share / normalizer, exact payments.
EatingOutcome run_eating_mechanism(const SignalProfile& s, const std::vector<ValuationOracle>& v,
                                   const EatingConfig& config = {});

}  // namespace iva
