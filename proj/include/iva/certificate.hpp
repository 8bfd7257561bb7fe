#pragma once

#include <vector>

#include "iva/types.hpp"
#include "iva/valuation.hpp"

namespace iva {

/// Feasible solution to every dual program (D_i), built from the
/// self-bounding structure: gamma_{i,j} from the log-gap formula, symmetric
/// beta_{i,j} = gamma_{i,j} gamma_{j,i} / n, alpha_i = 1 - sum_j beta_{i,j}.
/// By weak duality the bound dominates the sum of eating shares; for SOS
/// inputs it is at most 4.
struct DualCertificate {
  /// Bidders with positive share in the full instance (the construction
  /// restricts to them, which only raises shares and keeps every (P_i)
  /// feasible); original indices.
  std::vector<int> bidders;
  std::vector<double> alpha;                 // per kept bidder
  std::vector<std::vector<double>> beta;     // kept x kept, zero diagonal
  std::vector<std::vector<double>> gamma;    // kept x kept, unit diagonal
  std::vector<double> dual_values;           // per kept bidder: value of its (D_i) solution
  std::vector<double> restricted_shares;     // per kept bidder, dominated by dual_values
  double bound = 0;                          // A + B = sum of dual values
  double a_part = 0;
  double b_part = 0;
  double sum_shares = 0;                     // full instance: sum over all bidders of eat(w_i)_i
  double self_bounding_rhs = 0;              // 1 + (3/n) sum_i sum_j (1 - shadow/value)
  bool dual_feasible = true;
};

DualCertificate build_dual_certificate(const SignalProfile& s,
                                       const std::vector<ValuationOracle>& v,
                                       const ShadowOperator& op = {});

}  // namespace iva
