#pragma once

#include <optional>
#include <vector>

#include "iva/types.hpp"

namespace iva {

/// maximize objective . x + objective_offset
/// subject to constraints x <= bounds, x_j >= 0 where non_negative[j].
/// Dense and small by design (the verification oracle runs at desk scale).
struct LinearProgram {
  std::vector<double> objective;
  double objective_offset = 0;
  std::vector<std::vector<double>> constraints;  // one row per inequality
  std::vector<double> bounds;
  std::vector<bool> non_negative;  // false = free variable

  int num_vars() const { return static_cast<int>(objective.size()); }
  void validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct SimplexResult {
  LpStatus status = LpStatus::kOptimal;
  double value = 0;  // includes objective_offset
  std::vector<double> solution;
};

/// Two-phase dense tableau simplex with Bland's rule (deterministic, cycle
/// free). Free variables are split internally. Throws on the iteration guard
/// (should be unreachable with Bland's rule).
SimplexResult simplex_solve(const LinearProgram& lp);

/// The share LP for bidder i under weights w:
///   maximize y_i  s.t.  y_i <= y_j + ln w(i) - ln w(j) for j != i,
///   sum y <= 1, y >= 0,
/// with zero-weight bidders dropped (their constraint is vacuous). Returns
/// nullopt when w(i) = 0: the share is pinned to 0 and the program is treated
/// as infeasible by convention.
std::optional<LinearProgram> make_share_lp(const WeightFunction& w, int i);

/// The stopping-time LP for bidder i (free variable t first, then z_j for
/// positive-weight bidders):
///   maximize t + ln w(i)  s.t.  t + ln w(j) <= z_j, sum z <= 1, z >= 0.
/// Always feasible; the share equals max(0, optimum).
std::optional<LinearProgram> make_time_lp(const WeightFunction& w, int i);

/// eat(w)_i as the LP oracle sees it: the share-LP optimum when feasible and
/// 0 otherwise.
double lp_share(const WeightFunction& w, int i);

}  // namespace iva
