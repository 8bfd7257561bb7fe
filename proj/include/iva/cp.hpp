#pragma once

#include <cstdint>
#include <vector>

#include "iva/matroid.hpp"
#include "iva/rng.hpp"
#include "iva/types.hpp"
#include "iva/valuation.hpp"

namespace iva {

struct CandidateFiltering {
  std::vector<int> candidates;                    // sorted ascending
  std::vector<WeightFunction> weights;            // w_i per bidder
  std::vector<GreedyResult> per_bidder_greedy;    // I_i
};

/// Mechanism CP step 2: bidder i is a candidate iff greedy over
/// (own real value, others' shadow values) selects i.
CandidateFiltering candidate_set(const SignalProfile& s, const std::vector<ValuationOracle>& v,
                                 const Matroid& m, const ShadowOperator& op = {});

/// Reported criticality bounds for the heterogeneous-d variant.
struct HeteroDReport {
  std::vector<int> reported_d;

  /// Lowest-index bidder attaining the maximal report.
  int argmax() const;
  /// max over j != i of reported_d[j]; 0 for an empty max (n = 1).
  int max_excluding(int i) const;
};

struct CPOutcome {
  enum class Kind { kHomogeneous, kHetero };
  Kind kind = Kind::kHomogeneous;

  std::vector<int> candidates;
  std::vector<WeightFunction> weights;
  std::vector<std::vector<int>> per_bidder_greedy;
  /// Partition of the candidate pool (candidates, or candidates minus the
  /// argmax bidder in the hetero variant) into nonempty independent sets.
  std::vector<std::vector<int>> partition;
  /// Number of equally likely serving slots; slots beyond partition.size()
  /// are empty, so each pool member is served with probability 1/slots.
  int slots = 1;
  std::vector<double> probabilities;  // per bidder, analytic
  std::vector<double> payments;       // per bidder, charged up-front (Eq-pricing)
  std::vector<double> thetas;         // critical weights, candidates only (else 0)
  std::uint64_t seed = 0;
  std::vector<int> served;            // realized served set for this seed

  // hetero diagnostics
  int imax = -1;
  bool imax_candidate = false;
  int dbar = 0;       // max report excluding imax; sizes the TAILS partition
  int dbar_imax = 0;  // max report excluding imax (imax's own probability)

  double expected_welfare(const SignalProfile& s, const std::vector<ValuationOracle>& v) const;
  bool is_candidate(int bidder) const;
};

/// One realized serving draw consistent with the outcome's analytic
/// probabilities (used once inside run_cp/run_cp_hetero; tests re-draw it
/// for Monte-Carlo frequency checks).
std::vector<int> draw_serving(const CPOutcome& outcome, RandomStream& rng);

/// Mechanism CP: candidates, partition into <= d+1 independent sets, one of
/// d+1 slots served uniformly, threshold payments. Throws PartitionInfeasible
/// when the partition condition fails (evidence of a mis-declared d).
CPOutcome run_cp(const SignalProfile& s, const std::vector<ValuationOracle>& v, const Matroid& m,
                 int d, std::uint64_t seed, const ShadowOperator& op = {});

/// Threshold payment for bidder i: theta/(d+1) when i is a candidate, else 0.
double cp_payment(int i, const SignalProfile& s, const std::vector<ValuationOracle>& v,
                  const Matroid& m, int d, const ShadowOperator& op = {});

/// Heterogeneous-d variant: a fair coin serves either the argmax reporter
/// alone (w.p. 1/(dbar_imax+1)) or one of dbar+1 slots over the partition of
/// the remaining candidates.
CPOutcome run_cp_hetero(const SignalProfile& s, const std::vector<ValuationOracle>& v,
                        const Matroid& m, const HeteroDReport& reports, std::uint64_t seed,
                        const ShadowOperator& op = {});

}  // namespace iva
