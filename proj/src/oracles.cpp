#include "iva/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace iva {

BruteForceOpt brute_force_opt(const SignalProfile& s, const std::vector<ValuationOracle>& v,
                              const Matroid& m) {
  const int n = s.size();
  require(static_cast<int>(v.size()) == n, "one oracle per bidder");
  require(m.size() == n, "matroid ground set must match the bidder count");
  require(n <= 12, "brute force enumeration is limited to n <= 12");

  std::vector<double> value(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) value[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)](s);
  // ascending-index summation everywhere, so equal sets give equal floats
  auto set_value = [&](std::uint64_t mask) {
    double total = 0;
    while (mask) {
      int e = std::countr_zero(mask);
      mask &= mask - 1;
      total += value[static_cast<std::size_t>(e)];
    }
    return total;
  };

  BruteForceOpt best;
  std::uint64_t best_mask = 0;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    if (!m.independent(mask)) continue;
    const double total = set_value(mask);
    if (total > best.value) {
      best.value = total;
      best_mask = mask;
    }
  }
  // ties resolve toward the greedy set so comparisons are apples-to-apples
  const GreedyResult greedy = greedy_max_weight(m, value);
  const std::uint64_t greedy_mask = to_mask(greedy.selected, n);
  if (set_value(greedy_mask) >= best.value) best_mask = greedy_mask;
  best.value = set_value(best_mask);
  best.optimal_set = from_mask(best_mask);
  return best;
}

std::vector<double> make_value_grid(double truth, int points) {
  require(points >= 2, "value grid needs at least two points");
  const double hi = truth > 0 ? 2.0 * truth : 1.0;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points) + 1);
  for (int k = 0; k < points; ++k) {
    grid.push_back(hi * static_cast<double>(k) / static_cast<double>(points - 1));
  }
  if (std::find(grid.begin(), grid.end(), truth) == grid.end()) grid.push_back(truth);
  std::sort(grid.begin(), grid.end());
  return grid;
}

namespace {

// Allocation probability and payment of one bidder as a function of its
// reported scalar value, everything else fixed to truth.
struct ReportResponse {
  double probability = 0;
  double payment = 0;
};

ReportResponse eating_response(const AllocationCurve& curve, double reported) {
  return {curve.probability_at(reported), payment_of(curve, reported)};
}

ReportResponse step_response(const Matroid& m, int bidder, const WeightFunction& w,
                             const CriticalWeight& cw, double height, double reported) {
  const bool selected = greedy_selects_at(m, bidder, w, reported);
  ReportResponse response;
  if (selected) {
    response.probability = height;
    response.payment = height * cw.theta;
  }
  return response;
}

}  // namespace

AuditResult truthfulness_audit(MechanismKind mechanism, const Instance& instance, int bidder,
                               const std::vector<double>& value_grid,
                               const MechanismParams& params) {
  const int n = instance.n();
  require(bidder >= 0 && bidder < n, "bidder out of range");
  require(!value_grid.empty(), "audit needs a value grid");
  const auto& v = instance.valuations;
  require(static_cast<int>(v.size()) == n, "one oracle per bidder");

  const double truth = v[static_cast<std::size_t>(bidder)](instance.signals);
  // others' weights in this bidder's processes never depend on its report
  WeightFunction w(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    w[static_cast<std::size_t>(j)] =
        j == bidder ? truth
                    : shadow_value(v[static_cast<std::size_t>(j)], instance.signals, bidder,
                                   params.shadow);
  }

  std::function<ReportResponse(double)> respond;
  AllocationCurve curve({CurveSegment{0, 1, 1, 1}}, 1);  // replaced below
  CriticalWeight cw;
  double height = 0;
  switch (mechanism) {
    case MechanismKind::kEating: {
      curve = allocation_curve(w, bidder, params.eating_normalizer);
      respond = [&](double reported) { return eating_response(curve, reported); };
      break;
    }
    case MechanismKind::kCp: {
      require(instance.matroid != nullptr, "cp audit needs a matroid");
      cw = critical_weight(*instance.matroid, bidder, w);
      height = 1.0 / (params.d + 1);
      respond = [&](double reported) {
        return step_response(*instance.matroid, bidder, w, cw, height, reported);
      };
      break;
    }
    case MechanismKind::kCpHetero: {
      require(instance.matroid != nullptr, "cp audit needs a matroid");
      require(params.reports.has_value(), "cp-hetero audit needs the d reports");
      cw = critical_weight(*instance.matroid, bidder, w);
      const int imax = params.reports->argmax();
      const int dbar = params.reports->max_excluding(imax);
      height = bidder == imax ? 0.5 / (params.reports->max_excluding(imax) + 1)
                              : 0.5 / (dbar + 1);
      respond = [&](double reported) {
        return step_response(*instance.matroid, bidder, w, cw, height, reported);
      };
      break;
    }
  }

  const ReportResponse at_truth = respond(truth);
  AuditResult result;
  result.truth_utility = at_truth.probability * truth - at_truth.payment;

  double previous_probability = -1;
  for (double reported : value_grid) {
    require(reported >= 0, "reported values must be non-negative");
    const ReportResponse response = respond(reported);
    if (response.probability < previous_probability - 1e-12) result.allocation_monotone = false;
    previous_probability = response.probability;
    const double utility = response.probability * truth - response.payment;
    const double gain = utility - result.truth_utility;
    if (gain > result.worst_gain) {
      result.worst_gain = gain;
      if (gain > 1e-9) {
        result.pass = false;
        result.violation = AuditViolation{reported, gain};
      }
    }
  }
  if (!result.allocation_monotone) result.pass = false;
  return result;
}

}  // namespace iva
