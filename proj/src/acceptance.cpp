#include "iva/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "iva/certificate.hpp"
#include "iva/cp.hpp"
#include "iva/eating.hpp"
#include "iva/lp.hpp"
#include "iva/oracles.hpp"
#include "iva/rng.hpp"

namespace iva {

namespace {

using Rational = boost::multiprecision::cpp_rational;

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& message) {
    if (pass) detail << message;
    pass = false;
  }
};

// --------------------------------------------------------------------------
// Instance generators (seeded, deterministic)

std::vector<double> random_signals(RandomStream& rng, int n, double zero_chance) {
  std::vector<double> s(static_cast<std::size_t>(n));
  for (double& x : s) x = rng.uniform01() < zero_chance ? 0.0 : rng.uniform(0.0, 1.0);
  return s;
}

// one of affine-resale / max-signal / mineral-average, n in [2, 10]
Instance random_sos_instance(RandomStream& rng, int which) {
  const int n = 2 + static_cast<int>(rng.uniform_int(9));
  ValuationFamilySpec spec;
  switch (which % 3) {
    case 0: {
      std::vector<double> own(static_cast<std::size_t>(n));
      std::vector<std::vector<double>> cross(static_cast<std::size_t>(n),
                                             std::vector<double>(static_cast<std::size_t>(n), 0.0));
      for (int i = 0; i < n; ++i) {
        own[static_cast<std::size_t>(i)] = rng.uniform(0.1, 2.0);
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          cross[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              rng.uniform01() < 0.3 ? 0.0 : rng.uniform(0.0, 1.0);
        }
      }
      spec = ValuationFamilySpec::affine_resale(std::move(own), std::move(cross));
      break;
    }
    case 1: spec = ValuationFamilySpec::max_signal(); break;
    default: spec = ValuationFamilySpec::mineral_average(); break;
  }
  Instance instance;
  instance.signals = SignalProfile(random_signals(rng, n, 0.15));
  instance.valuations = make_family(spec, n);
  instance.matroid = std::make_shared<UniformMatroid>(n, 1);
  return instance;
}

std::shared_ptr<const Matroid> random_feasibility_matroid(RandomStream& rng, int n, int which) {
  switch (which % 3) {
    case 0: return std::make_shared<UniformMatroid>(n, 1 + static_cast<int>(rng.uniform_int(3)));
    case 1: {
      const int vertices = 2 + static_cast<int>(rng.uniform_int(4));
      std::vector<std::pair<int, int>> edges;
      for (int e = 0; e < n; ++e) {
        int u = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(vertices)));
        int w = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(vertices)));
        if (u == w) w = (w + 1) % vertices;
        edges.emplace_back(u, w);
      }
      return std::make_shared<GraphicMatroid>(vertices, std::move(edges));
    }
    default: {
      std::vector<std::vector<int>> blocks;
      std::vector<int> capacities;
      int next = 0;
      while (next < n) {
        const int size = std::min(n - next, 1 + static_cast<int>(rng.uniform_int(3)));
        std::vector<int> block;
        for (int k = 0; k < size; ++k) block.push_back(next++);
        blocks.push_back(std::move(block));
        capacities.push_back(1 + static_cast<int>(rng.uniform_int(2)));
      }
      return std::make_shared<PartitionMatroid>(std::move(blocks), std::move(capacities));
    }
  }
}

// max-signal (d = 1) or weighted-matroid-rank over a uniform inner matroid
// (d = rank <= 3); returns the instance and the criticality bound d
std::pair<Instance, int> random_cp_instance(RandomStream& rng, int which) {
  const int n = 3 + static_cast<int>(rng.uniform_int(6));  // 3..8
  Instance instance;
  int d = 1;
  if (which % 2 == 0) {
    instance.valuations = make_family(ValuationFamilySpec::max_signal(), n);
  } else {
    d = 1 + static_cast<int>(rng.uniform_int(3));  // 1..3
    std::vector<double> weights(static_cast<std::size_t>(n));
    for (double& w : weights) w = rng.uniform(0.5, 2.0);
    auto inner = std::make_shared<UniformMatroid>(n, d);
    instance.valuations =
        make_family(ValuationFamilySpec::weighted_matroid_rank(inner, std::move(weights)), n);
  }
  instance.signals = SignalProfile(random_signals(rng, n, 0.1));
  instance.matroid = random_feasibility_matroid(rng, n, static_cast<int>(rng.uniform_int(3)));
  return {std::move(instance), d};
}

std::vector<double> true_values(const Instance& instance) {
  std::vector<double> values(static_cast<std::size_t>(instance.n()));
  for (int i = 0; i < instance.n(); ++i) {
    values[static_cast<std::size_t>(i)] =
        instance.valuations[static_cast<std::size_t>(i)](instance.signals);
  }
  return values;
}

// deterministic catalog of small matroids, materialized as explicit with the
// axioms re-verified
std::vector<ExplicitMatroid> explicit_catalog(int max_n, std::uint64_t seed) {
  std::vector<ExplicitMatroid> catalog;
  RandomStream rng(seed);
  for (int n = 2; n <= max_n; ++n) {
    catalog.push_back(materialize(UniformMatroid(n, 1)));
    catalog.push_back(materialize(UniformMatroid(n, std::max(1, n / 2))));
    catalog.push_back(materialize(UniformMatroid(n, n)));
    // path and cycle graphs (n edges each)
    std::vector<std::pair<int, int>> path;
    for (int e = 0; e < n; ++e) path.emplace_back(e, e + 1);
    catalog.push_back(materialize(GraphicMatroid(n + 1, path)));
    std::vector<std::pair<int, int>> cycle;
    for (int e = 0; e < n; ++e) cycle.emplace_back(e, (e + 1) % n);
    catalog.push_back(materialize(GraphicMatroid(n, cycle)));
    // partition matroid with unit capacities
    std::vector<std::vector<int>> blocks;
    for (int start = 0; start < n; start += 2) {
      std::vector<int> block{start};
      if (start + 1 < n) block.push_back(start + 1);
      blocks.push_back(std::move(block));
    }
    catalog.push_back(
        materialize(PartitionMatroid(blocks, std::vector<int>(blocks.size(), 1))));
    // random rational matrix
    std::vector<std::vector<RationalEntry>> rows(3);
    for (auto& row : rows) {
      for (int c = 0; c < n; ++c) {
        row.push_back({static_cast<long long>(rng.uniform_int(5)) - 2, 1});
      }
    }
    catalog.push_back(materialize(LinearMatroid(n, std::move(rows))));
  }
  if (max_n >= 6) {
    std::vector<std::pair<int, int>> k4{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    catalog.push_back(materialize(GraphicMatroid(4, k4)));
  }
  return catalog;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// --------------------------------------------------------------------------
// Criterion 1: eat() agrees with the (P_i) simplex oracle

CriterionResult criterion_lp_equivalence() {
  Check check;
  RandomStream rng(20240901);
  double worst = 0;
  for (int trial = 0; trial < 200 && check.pass; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(7));
    WeightFunction w(static_cast<std::size_t>(n));
    for (double& x : w) {
      x = rng.uniform01() < 0.1 ? 0.0 : std::exp(rng.uniform(-3.0, 3.0));
    }
    const EatingResult result = eat(w);
    for (int i = 0; i < n && check.pass; ++i) {
      const double share = result.shares[static_cast<std::size_t>(i)];
      const auto lp = make_share_lp(w, i);
      if (!lp) {
        if (share != 0) check.fail("zero-weight bidder received a share");
        continue;
      }
      const SimplexResult solved = simplex_solve(*lp);
      if (solved.status == LpStatus::kInfeasible) {
        if (std::abs(share) > 1e-7) check.fail("infeasible (P_i) but positive share");
        continue;
      }
      if (solved.status != LpStatus::kOptimal) {
        check.fail("share LP unbounded");
        continue;
      }
      const double gap = std::abs(share - solved.value);
      worst = std::max(worst, gap);
      if (gap > 1e-7) {
        std::ostringstream msg;
        msg << "trial " << trial << " bidder " << i << ": |eat - lp| = " << gap;
        check.fail(msg.str());
      }
      if (share == 0 && solved.value > 1e-7) check.fail("zero share but positive LP value");
      // stopping-time formulation agrees as well
      const auto time_lp = make_time_lp(w, i);
      const SimplexResult time_solved = simplex_solve(*time_lp);
      if (time_solved.status != LpStatus::kOptimal ||
          std::abs(std::max(0.0, time_solved.value) - share) > 1e-7) {
        check.fail("(P_i') disagrees with eat");
      }
    }
  }
  if (check.pass) check.detail << "200 weight vectors, worst |eat - lp| = " << worst;
  return {1, "lp-equivalence", check.pass, check.detail.str(), 0};
}

// --------------------------------------------------------------------------
// Criterion 2: feasibility and the dual certificate

CriterionResult criterion_feasibility() {
  Check check;
  RandomStream rng(20240902);
  double worst_sum = 0, worst_bound = 0;
  for (int trial = 0; trial < 1000 && check.pass; ++trial) {
    const Instance instance = random_sos_instance(rng, trial);
    const EatingOutcome outcome = run_eating_mechanism(instance.signals, instance.valuations);
    double sum_shares = 0;
    for (int i = 0; i < instance.n(); ++i) {
      sum_shares += outcome.processes[static_cast<std::size_t>(i)]
                        .shares[static_cast<std::size_t>(i)];
    }
    worst_sum = std::max(worst_sum, sum_shares);
    if (sum_shares > 4.0 + 1e-9) check.fail("sum of pre-normalized shares exceeds 4");
    if (outcome.total_allocation > 1.0 + 1e-9) check.fail("sum of probabilities exceeds 1");

    const DualCertificate cert =
        build_dual_certificate(instance.signals, instance.valuations);
    worst_bound = std::max(worst_bound, cert.bound);
    if (!cert.dual_feasible) check.fail("dual certificate infeasible");
    if (cert.sum_shares > cert.bound + 1e-9) check.fail("certificate bound below sum of shares");
    if (cert.bound > 4.0 + 1e-9) check.fail("certificate bound exceeds 4");
    if (std::abs(cert.sum_shares - sum_shares) > 1e-9) {
      check.fail("certificate share bookkeeping mismatch");
    }
  }
  if (check.pass) {
    check.detail << "1000 SOS instances, worst sum_y = " << worst_sum
                 << ", worst bound = " << worst_bound;
  }
  return {2, "eating-feasibility", check.pass, check.detail.str(), 0};
}

// --------------------------------------------------------------------------
// Criterion 3: 5-approximation and the scalar minimum

CriterionResult criterion_five_approx() {
  Check check;
  RandomStream rng(20240902);  // the same 1000 instances as criterion 2
  double worst_ratio = 10;
  for (int trial = 0; trial < 1000 && check.pass; ++trial) {
    const Instance instance = random_sos_instance(rng, trial);
    const EatingOutcome outcome = run_eating_mechanism(instance.signals, instance.valuations);
    const std::vector<double> values = true_values(instance);
    const double best = *std::max_element(values.begin(), values.end());
    if (best <= 0) continue;
    const double ratio =
        outcome.expected_welfare(instance.signals, instance.valuations) / best;
    worst_ratio = std::min(worst_ratio, ratio);
    if (ratio < 0.2 - 1e-9) {
      std::ostringstream msg;
      msg << "trial " << trial << ": welfare ratio " << ratio << " below 0.2";
      check.fail(msg.str());
    }
    // intermediate bound through the top bidder's own share
    const int star = static_cast<int>(std::max_element(values.begin(), values.end()) -
                                      values.begin());
    const double y = outcome.processes[static_cast<std::size_t>(star)]
                         .shares[static_cast<std::size_t>(star)];
    if (y + (1.0 - y) * std::exp(-y) < 0.8005 - 1e-3) {
      check.fail("top bidder's share dips below the scalar minimum");
    }
  }

  // scalar fact: min over [0,1] of y + (1-y) e^{-y} = 0.8005 at y = 0.44
  double lo = 0, hi = 1;
  for (int iter = 0; iter < 200; ++iter) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    auto g = [](double y) { return y + (1.0 - y) * std::exp(-y); };
    if (g(m1) < g(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  const double argmin = (lo + hi) / 2;
  const double minimum = argmin + (1.0 - argmin) * std::exp(-argmin);
  if (std::abs(minimum - 0.8005) > 1e-3) check.fail("scalar minimum off 0.8005");
  if (std::abs(argmin - 0.44) > 0.02) check.fail("scalar argmin off 0.44");

  if (check.pass) {
    check.detail << "worst welfare ratio = " << worst_ratio << ", scalar min " << minimum
                 << " at y = " << argmin;
  }
  return {3, "eating-5-approximation", check.pass, check.detail.str(), 0};
}

// --------------------------------------------------------------------------
// Criterion 4: CP correctness

CriterionResult criterion_cp_correctness() {
  Check check;
  RandomStream rng(20240904);
  for (int trial = 0; trial < 500 && check.pass; ++trial) {
    auto [instance, d] = random_cp_instance(rng, trial);
    const Matroid& m = *instance.matroid;
    CPOutcome outcome;
    try {
      outcome = run_cp(instance.signals, instance.valuations, m, d,
                       0x1234 + static_cast<std::uint64_t>(trial));
    } catch (const PartitionInfeasible& e) {
      std::ostringstream msg;
      msg << "trial " << trial << ": " << e.what();
      check.fail(msg.str());
      break;
    }
    const std::vector<double> values = true_values(instance);
    const GreedyResult opt_greedy = greedy_max_weight(m, values);

    // I* subseteq C
    for (int i : opt_greedy.selected) {
      if (!outcome.is_candidate(i)) check.fail("optimal bidder missing from candidates");
    }
    // |C| <= (d+1) |I*|
    if (outcome.candidates.size() >
        static_cast<std::size_t>(d + 1) * opt_greedy.selected.size()) {
      check.fail("candidate count exceeds (d+1) |I*|");
    }
    // partition: <= d+1 parts, independent, disjoint, covering C
    if (static_cast<int>(outcome.partition.size()) > d + 1) check.fail("too many parts");
    std::vector<int> covered;
    for (const auto& part : outcome.partition) {
      if (!m.independent(part)) check.fail("partition part not independent");
      covered.insert(covered.end(), part.begin(), part.end());
    }
    std::sort(covered.begin(), covered.end());
    if (std::adjacent_find(covered.begin(), covered.end()) != covered.end()) {
      check.fail("partition parts overlap");
    }
    if (covered != outcome.candidates) check.fail("partition does not cover the candidates");

    // serving probabilities exactly 1/(d+1), welfare bound exact in rationals
    const double height = 1.0 / (d + 1);
    for (int i = 0; i < instance.n(); ++i) {
      const double expected = outcome.is_candidate(i) ? height : 0.0;
      if (outcome.probabilities[static_cast<std::size_t>(i)] != expected) {
        check.fail("candidate probability differs from 1/(d+1)");
      }
    }
    const BruteForceOpt opt = brute_force_opt(instance.signals, instance.valuations, m);
    Rational candidate_sum = 0, opt_sum = 0;
    for (int i : outcome.candidates) candidate_sum += Rational(values[static_cast<std::size_t>(i)]);
    for (int i : opt.optimal_set) opt_sum += Rational(values[static_cast<std::size_t>(i)]);
    if (candidate_sum < opt_sum) {
      check.fail("expected welfare below OPT/(d+1) in exact arithmetic");
    }
    // realized serving is feasible
    if (!m.independent(outcome.served)) check.fail("served set not independent");
  }
  if (check.pass) check.detail << "500 instances across uniform/graphic/partition matroids";
  return {4, "cp-correctness", check.pass, check.detail.str(), 0};
}

// --------------------------------------------------------------------------
// Criterion 5: partition condition iff partition exists

bool coloring_exists(const Matroid& m, const std::vector<int>& elements, int t) {
  std::vector<std::uint64_t> parts(static_cast<std::size_t>(t), 0);
  std::function<bool(std::size_t)> place = [&](std::size_t idx) {
    if (idx == elements.size()) return true;
    const std::uint64_t b = std::uint64_t{1} << elements[idx];
    for (int r = 0; r < t; ++r) {
      if (m.independent(parts[static_cast<std::size_t>(r)] | b)) {
        parts[static_cast<std::size_t>(r)] |= b;
        if (place(idx + 1)) return true;
        parts[static_cast<std::size_t>(r)] &= ~b;
      }
    }
    return false;
  };
  return place(0);
}

CriterionResult criterion_partition_condition() {
  Check check;
  const auto catalog = explicit_catalog(8, 20240905);
  int cases = 0;
  for (const auto& m : catalog) {
    std::vector<int> full(static_cast<std::size_t>(m.size()));
    for (int e = 0; e < m.size(); ++e) full[static_cast<std::size_t>(e)] = e;
    for (int t = 1; t <= 3 && check.pass; ++t) {
      ++cases;
      const auto condition = verify_partition_condition(m, full, t);
      bool partitioned = true;
      IndependentSetPartition partition;
      try {
        partition = partition_into(m, full, t);
      } catch (const PartitionInfeasible& e) {
        partitioned = false;
        // the certificate really violates the condition
        const auto& bad = e.violating_subset();
        if (static_cast<int>(bad.size()) <= t * rank(m, bad)) {
          check.fail("infeasibility certificate does not violate the condition");
        }
      }
      if (condition.pass != partitioned) {
        std::ostringstream msg;
        msg << m.describe() << " t=" << t << ": condition " << condition.pass
            << " but partition " << partitioned;
        check.fail(msg.str());
      }
      if (partitioned) {
        if (static_cast<int>(partition.parts.size()) > t) check.fail("too many parts");
        std::uint64_t seen = 0;
        for (const auto& part : partition.parts) {
          if (!m.independent(part)) check.fail("part not independent");
          const std::uint64_t mask = to_mask(part, m.size());
          if (seen & mask) check.fail("parts overlap");
          seen |= mask;
        }
        if (seen != to_mask(full, m.size())) check.fail("parts do not cover");
      }
      if (m.size() <= 6 && coloring_exists(m, full, t) != condition.pass) {
        check.fail("exhaustive coloring disagrees with the condition");
      }
    }
    if (!check.pass) break;
  }
  if (check.pass) check.detail << cases << " (matroid, t) cases, n <= 8, t in {1,2,3}";
  return {5, "matroid-partition-condition", check.pass, check.detail.str(), 0};
}

// --------------------------------------------------------------------------
// Criterion 6: greedy optimality and report monotonicity

CriterionResult criterion_greedy() {
  Check check;
  const auto catalog = explicit_catalog(10, 20240906);
  RandomStream rng(20240906);
  double worst_gap = 0;
  for (const auto& m : catalog) {
    for (int draw = 0; draw < 100 && check.pass; ++draw) {
      WeightFunction w(static_cast<std::size_t>(m.size()));
      for (double& x : w) x = rng.uniform(0.0, 1.0);
      const GreedyResult greedy = greedy_max_weight(m, w);
      double best = 0;
      const std::uint64_t limit = std::uint64_t{1} << m.size();
      for (std::uint64_t mask = 0; mask < limit; ++mask) {
        if (!m.independent(mask)) continue;
        double total = 0;
        for (int e = 0; e < m.size(); ++e) {
          if (mask & (std::uint64_t{1} << e)) total += w[static_cast<std::size_t>(e)];
        }
        best = std::max(best, total);
      }
      const double gap = std::abs(greedy.total_weight - best);
      worst_gap = std::max(worst_gap, gap);
      if (gap > 1e-9) check.fail("greedy total differs from enumeration OPT");
    }
    if (!check.pass) break;
  }

  // raising the winner's weight while lowering the others keeps it selected
  int pairs = 0;
  while (pairs < 1000 && check.pass) {
    const auto& m = catalog[rng.uniform_int(catalog.size())];
    WeightFunction w(static_cast<std::size_t>(m.size()));
    for (double& x : w) x = rng.uniform(0.0, 1.0);
    const GreedyResult greedy = greedy_max_weight(m, w);
    if (greedy.selected.empty()) continue;
    const int i = greedy.selected[rng.uniform_int(greedy.selected.size())];
    WeightFunction raised = w;
    raised[static_cast<std::size_t>(i)] += rng.uniform(0.0, 1.0);
    for (int j = 0; j < m.size(); ++j) {
      if (j == i) continue;
      raised[static_cast<std::size_t>(j)] *= rng.uniform01();
    }
    if (!greedy_max_weight(m, raised).contains(i)) {
      check.fail("previously selected element dropped after a favorable perturbation");
    }
    ++pairs;
  }
  if (check.pass) {
    check.detail << "enumeration matches on the catalog (worst gap " << worst_gap
                 << "), 1000 perturbation pairs stable";
  }
  return {6, "greedy-optimality", check.pass, check.detail.str(), 0};
}

// --------------------------------------------------------------------------
// Criterion 7: truthfulness

CriterionResult criterion_truthfulness() {
  Check check;
  RandomStream rng(20240907);
  double worst_gain = 0;
  int audits = 0;
  for (int trial = 0; trial < 100 && check.pass; ++trial) {
    Instance instance;
    MechanismKind kind;
    MechanismParams params;
    if (trial < 40) {
      kind = MechanismKind::kEating;
      instance = random_sos_instance(rng, trial);
    } else if (trial < 80) {
      kind = MechanismKind::kCp;
      auto [cp_instance, d] = random_cp_instance(rng, trial);
      instance = std::move(cp_instance);
      params.d = d;
    } else {
      kind = MechanismKind::kCpHetero;
      auto [cp_instance, d] = random_cp_instance(rng, trial);
      instance = std::move(cp_instance);
      params.d = d;
      std::vector<int> reports(static_cast<std::size_t>(instance.n()));
      for (int& r : reports) r = d + static_cast<int>(rng.uniform_int(3));
      params.reports = HeteroDReport{std::move(reports)};
    }
    for (int bidder = 0; bidder < instance.n() && check.pass; ++bidder) {
      const double truth = instance.valuations[static_cast<std::size_t>(bidder)](instance.signals);
      const AuditResult audit =
          truthfulness_audit(kind, instance, bidder, make_value_grid(truth, 51), params);
      ++audits;
      worst_gain = std::max(worst_gain, audit.worst_gain);
      if (!audit.pass) {
        std::ostringstream msg;
        msg << "trial " << trial << " bidder " << bidder << ": gain " << audit.worst_gain;
        check.fail(msg.str());
      }
      if (audit.truth_utility < -1e-12) check.fail("negative utility at truth");
    }
    // payments stay inside [0, x v]
    if (kind == MechanismKind::kEating) {
      const EatingOutcome outcome = run_eating_mechanism(instance.signals, instance.valuations);
      for (int i = 0; i < instance.n(); ++i) {
        const double cap = outcome.allocations[static_cast<std::size_t>(i)] *
                           instance.valuations[static_cast<std::size_t>(i)](instance.signals);
        const double p = outcome.payments[static_cast<std::size_t>(i)];
        if (p < 0 || p > cap + 1e-12) check.fail("eating payment outside [0, x v]");
      }
    } else if (kind == MechanismKind::kCp) {
      const CPOutcome outcome =
          run_cp(instance.signals, instance.valuations, *instance.matroid, params.d, 7);
      for (int i = 0; i < instance.n(); ++i) {
        const double cap = outcome.probabilities[static_cast<std::size_t>(i)] *
                           instance.valuations[static_cast<std::size_t>(i)](instance.signals);
        const double p = outcome.payments[static_cast<std::size_t>(i)];
        if (p < 0 || p > cap + 1e-12) check.fail("cp payment outside [0, x v]");
      }
    }
  }
  if (check.pass) {
    check.detail << audits << " audits on 50-point grids, worst gain = " << worst_gain;
  }
  return {7, "truthfulness", check.pass, check.detail.str(), 0};
}

// --------------------------------------------------------------------------
// Criterion 8: heterogeneous-d serving probabilities

CriterionResult criterion_hetero() {
  Check check;
  RandomStream rng(20240908);
  for (int trial = 0; trial < 20 && check.pass; ++trial) {
    auto [instance, d] = random_cp_instance(rng, trial);
    std::vector<int> reports(static_cast<std::size_t>(instance.n()));
    for (int& r : reports) r = d + static_cast<int>(rng.uniform_int(3));
    const HeteroDReport report{reports};
    CPOutcome outcome;
    try {
      outcome = run_cp_hetero(instance.signals, instance.valuations, *instance.matroid, report,
                              0x8888 + static_cast<std::uint64_t>(trial));
    } catch (const PartitionInfeasible& e) {
      check.fail(std::string("hetero partition failed: ") + e.what());
      break;
    }
    const int imax = report.argmax();
    const int dbar = report.max_excluding(imax);
    for (int i = 0; i < instance.n(); ++i) {
      double expected = 0;
      if (outcome.is_candidate(i)) {
        expected = i == imax ? 0.5 / (report.max_excluding(imax) + 1) : 0.5 / (dbar + 1);
      }
      if (outcome.probabilities[static_cast<std::size_t>(i)] != expected) {
        check.fail("analytic hetero probability mismatch");
      }
    }

    // Monte-Carlo frequencies on the first few instances
    if (trial < 4) {
      RandomStream draws(0xf00d + static_cast<std::uint64_t>(trial));
      const int runs = 100000;
      std::vector<int> hits(static_cast<std::size_t>(instance.n()), 0);
      for (int run = 0; run < runs; ++run) {
        for (int i : draw_serving(outcome, draws)) ++hits[static_cast<std::size_t>(i)];
      }
      for (int i = 0; i < instance.n(); ++i) {
        const double freq = static_cast<double>(hits[static_cast<std::size_t>(i)]) / runs;
        if (std::abs(freq - outcome.probabilities[static_cast<std::size_t>(i)]) > 0.01) {
          std::ostringstream msg;
          msg << "bidder " << i << " frequency " << freq << " vs "
              << outcome.probabilities[static_cast<std::size_t>(i)];
          check.fail(msg.str());
        }
      }
    }
  }
  if (check.pass) check.detail << "20 instances, 1e5 Monte-Carlo draws within 0.01";
  return {8, "hetero-d-probabilities", check.pass, check.detail.str(), 0};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::string& suite) {
  std::vector<std::pair<std::string, std::function<CriterionResult()>>> all = {
      {"eating", criterion_lp_equivalence},
      {"eating", criterion_feasibility},
      {"eating", criterion_five_approx},
      {"cp", criterion_cp_correctness},
      {"matroid", criterion_partition_condition},
      {"matroid", criterion_greedy},
      {"eating|cp", criterion_truthfulness},
      {"cp", criterion_hetero},
  };
  std::vector<CriterionResult> results;
  for (auto& [tags, run] : all) {
    if (suite != "all" && tags.find(suite) == std::string::npos) continue;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult result = run();
    result.seconds = elapsed_seconds(start);
    results.push_back(std::move(result));
  }
  if (results.empty()) throw std::invalid_argument("unknown suite: " + suite);
  return results;
}

bool print_acceptance(const std::vector<CriterionResult>& results, std::ostream& out) {
  bool all_pass = true;
  for (const auto& result : results) {
    out << "CRITERION " << result.id << " " << result.name << ": "
        << (result.pass ? "PASS" : "FAIL") << " [" << result.seconds << "s]";
    if (!result.detail.empty()) out << " - " << result.detail;
    out << '\n';
    all_pass &= result.pass;
  }
  return all_pass;
}

}  // namespace iva
