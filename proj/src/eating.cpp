#include "iva/eating.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace iva {

namespace {
void validate_weights(const WeightFunction& w) {
  for (double x : w) {
    require(std::isfinite(x), "eating weights must be finite");
    require(x >= 0, "eating weights must be non-negative");
  }
}
}  // namespace

EatingResult eat(const WeightFunction& w) {
  validate_weights(w);
  EatingResult result;
  result.shares.assign(w.size(), 0.0);

  // entrants sorted by start time -ln w(j); zero weights never start
  std::vector<std::pair<double, int>> starts;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] > 0) starts.emplace_back(-std::log(w[j]), static_cast<int>(j));
  }
  if (starts.empty()) return result;  // stopping time undefined, flagged by nullopt
  std::sort(starts.begin(), starts.end());

  // water level: with the first k entrants active, t = (1 + sum of starts)/k;
  // the unique valid segment has t before the (k+1)-th start
  const std::size_t m = starts.size();
  double prefix = 0;
  double t = 0;
  std::size_t active = m;
  for (std::size_t k = 0; k < m; ++k) {
    prefix += starts[k].first;
    t = (1.0 + prefix) / static_cast<double>(k + 1);
    if (k + 1 == m || t <= starts[k + 1].first) {
      active = k + 1;
      break;
    }
  }
  result.stopping_time = t;
  for (std::size_t k = 0; k < active; ++k) {
    const auto& [start, j] = starts[k];
    result.shares[static_cast<std::size_t>(j)] = std::max(0.0, t - start);
    if (t - start > 0) result.breakpoints.emplace_back(start, j);
  }
  return result;
}

double CurveSegment::share_at(double v) const {
  const double slope = static_cast<double>(active - 1) / static_cast<double>(active);
  return intercept + slope * std::log(v);
}

AllocationCurve::AllocationCurve(std::vector<CurveSegment> segments, double normalizer)
    : segments_(std::move(segments)), normalizer_(normalizer) {
  require(!segments_.empty(), "allocation curve needs at least one segment");
  require(normalizer_ > 0, "normalizer must be positive");
}

double AllocationCurve::entry_value() const { return segments_.front().v_lo; }

double AllocationCurve::share_at(double v) const {
  if (v <= entry_value()) return 0.0;
  for (const auto& segment : segments_) {
    if (v <= segment.v_hi) return std::clamp(segment.share_at(v), 0.0, 1.0);
  }
  return 1.0;  // last segment is unbounded; defensive fall-through
}

double AllocationCurve::probability_at(double v) const { return share_at(v) / normalizer_; }

namespace {
// antiderivative of a + c ln(tau); tau ln(tau) -> 0 at tau = 0
double segment_antiderivative(double a, double c, double tau) {
  if (tau <= 0 || c == 0) return a * tau;
  return a * tau + c * tau * (std::log(tau) - 1.0);
}
}  // namespace

double AllocationCurve::probability_integral(double v) const {
  if (v <= entry_value()) return 0.0;
  double total = 0;
  for (const auto& segment : segments_) {
    const double lo = std::max(segment.v_lo, entry_value());
    const double hi = std::min(segment.v_hi, v);
    if (hi <= lo) continue;
    const double slope = static_cast<double>(segment.active - 1) /
                         static_cast<double>(segment.active);
    total += segment_antiderivative(segment.intercept, slope, hi) -
             segment_antiderivative(segment.intercept, slope, lo);
    if (v <= segment.v_hi) break;
  }
  return total / normalizer_;
}

AllocationCurve allocation_curve(const WeightFunction& w, int bidder, double normalizer) {
  validate_weights(w);
  require(bidder >= 0 && bidder < static_cast<int>(w.size()), "bidder out of range");

  std::vector<double> starts;  // competitors' start times, ascending
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (static_cast<int>(j) != bidder && w[j] > 0) starts.push_back(-std::log(w[j]));
  }
  std::sort(starts.begin(), starts.end());
  const int m = static_cast<int>(starts.size());
  const double inf = std::numeric_limits<double>::infinity();

  if (m == 0) {
    // alone: full share at any positive value
    return AllocationCurve({CurveSegment{0.0, inf, 1.0, 1}}, normalizer);
  }

  // competitors-only water level fixes which of them are active when the
  // bidder enters with share zero
  WeightFunction others;
  for (std::size_t j = 0; j < w.size(); ++j) {
    others.push_back(static_cast<int>(j) == bidder ? 0.0 : w[j]);
  }
  EatingResult baseline = eat(others);
  const double t0 = *baseline.stopping_time;
  int q0 = 0;
  double prefix_q0 = 0;
  while (q0 < m && starts[static_cast<std::size_t>(q0)] < t0) {
    prefix_q0 += starts[static_cast<std::size_t>(q0)];
    ++q0;
  }
  const double entry = std::exp(-t0);

  // with q competitors active the share is (1+B_q)/(q+1) + (q/(q+1)) ln v,
  // valid while the water level stays between consecutive starts; segments
  // chain from the entry value up to the bidder eating alone (share 1)
  std::vector<CurveSegment> segments;
  double lower = entry;
  double prefix = prefix_q0;
  for (int q = q0; q >= 0; --q) {
    CurveSegment segment;
    segment.active = q + 1;
    segment.intercept = (1.0 + prefix) / static_cast<double>(q + 1);
    segment.v_lo = lower;
    segment.v_hi =
        q == 0 ? inf
               : std::exp(1.0 + prefix - (q + 1) * starts[static_cast<std::size_t>(q - 1)]);
    if (segment.v_hi > segment.v_lo) {
      segments.push_back(segment);
      lower = segment.v_hi;
    }
    if (q > 0) prefix -= starts[static_cast<std::size_t>(q - 1)];
  }
  return AllocationCurve(std::move(segments), normalizer);
}

double payment_of(const AllocationCurve& curve, double reported_value) {
  require(std::isfinite(reported_value) && reported_value >= 0,
          "reported value must be a finite non-negative real");
  if (reported_value == 0) return 0.0;
  const double allocation = curve.probability_at(reported_value);
  const double payment = allocation * reported_value - curve.probability_integral(reported_value);
  // closed-form integral of a non-decreasing curve keeps this inside
  // [0, x(v) v]; clamp only the float dust
  return std::clamp(payment, 0.0, allocation * reported_value);
}

double EatingOutcome::expected_welfare(const SignalProfile& s,
                                       const std::vector<ValuationOracle>& v) const {
  double welfare = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    welfare += allocations[i] * v[i](s);
  }
  return welfare;
}

EatingOutcome run_eating_mechanism(const SignalProfile& s, const std::vector<ValuationOracle>& v,
                                   const EatingConfig& config) {
  const int n = s.size();
  require(n >= 1, "need at least one bidder");
  require(static_cast<int>(v.size()) == n, "one oracle per bidder");
  require(config.normalizer > 0, "normalizer must be positive");

  EatingOutcome outcome;
  outcome.allocations.assign(static_cast<std::size_t>(n), 0.0);
  outcome.payments.assign(static_cast<std::size_t>(n), 0.0);
  for (const auto& oracle : v) {
    outcome.inputs_claimed_sos &= oracle.metadata().claimed_sos && oracle.metadata().monotone;
  }
  for (int i = 0; i < n; ++i) {
    // bidder i's process: own real value, everyone else's shadow value
    WeightFunction w(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
      w[static_cast<std::size_t>(j)] =
          j == i ? v[static_cast<std::size_t>(i)](s)
                 : shadow_value(v[static_cast<std::size_t>(j)], s, i, config.shadow);
    }
    EatingResult process = eat(w);
    const double share = process.shares[static_cast<std::size_t>(i)];
    outcome.allocations[static_cast<std::size_t>(i)] = share / config.normalizer;
    if (w[static_cast<std::size_t>(i)] > 0) {
      AllocationCurve curve = allocation_curve(w, i, config.normalizer);
      outcome.payments[static_cast<std::size_t>(i)] =
          payment_of(curve, w[static_cast<std::size_t>(i)]);
    }
    outcome.weights.push_back(std::move(w));
    outcome.processes.push_back(std::move(process));
  }
  for (double x : outcome.allocations) outcome.total_allocation += x;
  outcome.feasible = outcome.total_allocation <= 1.0 + 1e-9;
  return outcome;
}

}  // namespace iva
