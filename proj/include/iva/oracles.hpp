#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "iva/cp.hpp"
#include "iva/eating.hpp"
#include "iva/matroid.hpp"
#include "iva/types.hpp"
#include "iva/valuation.hpp"

namespace iva {

/// One auction instance: signals, valuation oracles, feasibility matroid.
struct Instance {
  SignalProfile signals;
  std::vector<ValuationOracle> valuations;
  std::shared_ptr<const Matroid> matroid;

  int n() const { return signals.size(); }
};

struct BruteForceOpt {
  double value = 0;
  std::vector<int> optimal_set;  // the greedy set when it attains the max
};

/// Exhaustive welfare maximum over independent sets (n <= 12). The
/// enumeration is the independent check of greedy optimality, so it never
/// calls greedy to prune; ties resolve toward the greedy set.
BruteForceOpt brute_force_opt(const SignalProfile& s, const std::vector<ValuationOracle>& v,
                              const Matroid& m);

enum class MechanismKind { kEating, kCp, kCpHetero };

struct MechanismParams {
  double eating_normalizer = 4.0;
  int d = 1;                             // cp
  std::optional<HeteroDReport> reports;  // cp-hetero
  ShadowOperator shadow = {};
};

struct AuditViolation {
  double reported_value = 0;
  double utility_gain = 0;
};

struct AuditResult {
  bool pass = true;
  double truth_utility = 0;
  double worst_gain = 0;  // max over the grid of u(deviation) - u(truth)
  bool allocation_monotone = true;
  std::optional<AuditViolation> violation;
};

/// Sweeps reported values for one bidder (others fixed to truth) and checks
/// that truth-telling maximizes utility on the grid and that the allocation
/// is non-decreasing. Both mechanisms read the bidder's report only through
/// the scalar value, so the scalar sweep exhausts the deviation space.
AuditResult truthfulness_audit(MechanismKind mechanism, const Instance& instance, int bidder,
                               const std::vector<double>& value_grid,
                               const MechanismParams& params = {});

/// >= `points` values spanning [0, 2 * truth] (or [0, 1] when truth = 0),
/// always containing the truthful value itself.
std::vector<double> make_value_grid(double truth, int points = 51);

}  // namespace iva
