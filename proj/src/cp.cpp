#include "iva/cp.hpp"

#include <algorithm>
#include <cmath>

namespace iva {

CandidateFiltering candidate_set(const SignalProfile& s, const std::vector<ValuationOracle>& v,
                                 const Matroid& m, const ShadowOperator& op) {
  const int n = s.size();
  require(static_cast<int>(v.size()) == n, "one oracle per bidder");
  require(m.size() == n, "matroid ground set must match the bidder count");

  CandidateFiltering result;
  for (int i = 0; i < n; ++i) {
    WeightFunction w(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
      w[static_cast<std::size_t>(j)] =
          j == i ? v[static_cast<std::size_t>(i)](s)
                 : shadow_value(v[static_cast<std::size_t>(j)], s, i, op);
    }
    GreedyResult greedy = greedy_max_weight(m, w);
    if (greedy.contains(i)) result.candidates.push_back(i);
    result.weights.push_back(std::move(w));
    result.per_bidder_greedy.push_back(std::move(greedy));
  }
  return result;
}

int HeteroDReport::argmax() const {
  require(!reported_d.empty(), "need at least one report");
  int best = 0;
  for (int i = 1; i < static_cast<int>(reported_d.size()); ++i) {
    if (reported_d[static_cast<std::size_t>(i)] > reported_d[static_cast<std::size_t>(best)]) {
      best = i;
    }
  }
  return best;
}

int HeteroDReport::max_excluding(int i) const {
  int best = 0;  // max over the empty set is 0 by convention
  for (int j = 0; j < static_cast<int>(reported_d.size()); ++j) {
    if (j == i) continue;
    best = std::max(best, reported_d[static_cast<std::size_t>(j)]);
  }
  return best;
}

bool CPOutcome::is_candidate(int bidder) const {
  return std::binary_search(candidates.begin(), candidates.end(), bidder);
}

double CPOutcome::expected_welfare(const SignalProfile& s,
                                   const std::vector<ValuationOracle>& v) const {
  double welfare = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (probabilities[i] > 0) welfare += probabilities[i] * v[i](s);
  }
  return welfare;
}

std::vector<int> draw_serving(const CPOutcome& outcome, RandomStream& rng) {
  if (outcome.kind == CPOutcome::Kind::kHomogeneous) {
    // one of `slots` equally likely slots; slots past the partition are empty
    const auto slot = rng.uniform_int(static_cast<std::uint64_t>(outcome.slots));
    if (slot < outcome.partition.size()) return outcome.partition[slot];
    return {};
  }
  // hetero: fair coin between the argmax reporter alone and the partition of
  // the remaining candidates
  if (rng.coin()) {
    if (outcome.imax_candidate &&
        rng.uniform_int(static_cast<std::uint64_t>(outcome.dbar_imax + 1)) == 0) {
      return {outcome.imax};
    }
    return {};
  }
  const auto slot = rng.uniform_int(static_cast<std::uint64_t>(outcome.dbar + 1));
  if (slot < outcome.partition.size()) return outcome.partition[slot];
  return {};
}

namespace {
// Threshold payment for a step allocation of the given height: the
// Eq-pricing integral collapses to height * theta.
double step_payment(const Matroid& m, int i, const WeightFunction& w, double height) {
  const CriticalWeight cw = critical_weight(m, i, w);
  return height * cw.theta;
}
}  // namespace

CPOutcome run_cp(const SignalProfile& s, const std::vector<ValuationOracle>& v, const Matroid& m,
                 int d, std::uint64_t seed, const ShadowOperator& op) {
  require(d >= 0, "criticality bound must be non-negative");
  // oracles claiming more than d criticality are run anyway: a partition
  // failure below is the evidence that surfaces the mis-declared d
  CandidateFiltering filtering = candidate_set(s, v, m, op);

  CPOutcome outcome;
  outcome.kind = CPOutcome::Kind::kHomogeneous;
  outcome.seed = seed;
  outcome.candidates = filtering.candidates;
  outcome.weights = std::move(filtering.weights);
  for (auto& g : filtering.per_bidder_greedy) outcome.per_bidder_greedy.push_back(g.selected);
  outcome.slots = d + 1;

  auto condition = verify_partition_condition(m, outcome.candidates, d + 1);
  if (!condition.pass) throw PartitionInfeasible(condition.violating_subset, d + 1);
  outcome.partition = partition_into(m, outcome.candidates, d + 1).parts;

  const int n = s.size();
  outcome.probabilities.assign(static_cast<std::size_t>(n), 0.0);
  outcome.payments.assign(static_cast<std::size_t>(n), 0.0);
  outcome.thetas.assign(static_cast<std::size_t>(n), 0.0);
  const double height = 1.0 / (d + 1);
  for (int i : outcome.candidates) {
    outcome.probabilities[static_cast<std::size_t>(i)] = height;
    const CriticalWeight cw = critical_weight(m, i, outcome.weights[static_cast<std::size_t>(i)]);
    outcome.thetas[static_cast<std::size_t>(i)] = cw.theta;
    outcome.payments[static_cast<std::size_t>(i)] = height * cw.theta;
  }

  RandomStream rng(seed);
  outcome.served = draw_serving(outcome, rng);
  return outcome;
}

double cp_payment(int i, const SignalProfile& s, const std::vector<ValuationOracle>& v,
                  const Matroid& m, int d, const ShadowOperator& op) {
  require(d >= 0, "criticality bound must be non-negative");
  CandidateFiltering filtering = candidate_set(s, v, m, op);
  if (!std::binary_search(filtering.candidates.begin(), filtering.candidates.end(), i)) {
    return 0.0;  // losers pay nothing
  }
  return step_payment(m, i, filtering.weights[static_cast<std::size_t>(i)], 1.0 / (d + 1));
}

CPOutcome run_cp_hetero(const SignalProfile& s, const std::vector<ValuationOracle>& v,
                        const Matroid& m, const HeteroDReport& reports, std::uint64_t seed,
                        const ShadowOperator& op) {
  const int n = s.size();
  require(static_cast<int>(reports.reported_d.size()) == n, "one report per bidder");
  for (int d : reports.reported_d) require(d >= 0, "reports must be non-negative integers");

  CandidateFiltering filtering = candidate_set(s, v, m, op);

  CPOutcome outcome;
  outcome.kind = CPOutcome::Kind::kHetero;
  outcome.seed = seed;
  outcome.candidates = filtering.candidates;
  outcome.weights = std::move(filtering.weights);
  for (auto& g : filtering.per_bidder_greedy) outcome.per_bidder_greedy.push_back(g.selected);
  outcome.imax = reports.argmax();
  outcome.imax_candidate = outcome.is_candidate(outcome.imax);
  outcome.dbar_imax = reports.max_excluding(outcome.imax);
  outcome.dbar = outcome.dbar_imax;  // TAILS partitions the pool without imax
  outcome.slots = outcome.dbar + 1;

  std::vector<int> pool;  // candidates without imax
  for (int i : outcome.candidates) {
    if (i != outcome.imax) pool.push_back(i);
  }
  auto condition = verify_partition_condition(m, pool, outcome.dbar + 1);
  if (!condition.pass) throw PartitionInfeasible(condition.violating_subset, outcome.dbar + 1);
  outcome.partition = partition_into(m, pool, outcome.dbar + 1).parts;

  outcome.probabilities.assign(static_cast<std::size_t>(n), 0.0);
  outcome.payments.assign(static_cast<std::size_t>(n), 0.0);
  outcome.thetas.assign(static_cast<std::size_t>(n), 0.0);
  for (int i : outcome.candidates) {
    const double height = i == outcome.imax ? 0.5 / (outcome.dbar_imax + 1)
                                            : 0.5 / (outcome.dbar + 1);
    outcome.probabilities[static_cast<std::size_t>(i)] = height;
    const CriticalWeight cw = critical_weight(m, i, outcome.weights[static_cast<std::size_t>(i)]);
    outcome.thetas[static_cast<std::size_t>(i)] = cw.theta;
    outcome.payments[static_cast<std::size_t>(i)] = height * cw.theta;
  }

  RandomStream rng(seed);
  outcome.served = draw_serving(outcome, rng);
  return outcome;
}

}  // namespace iva
