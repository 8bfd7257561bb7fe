#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "iva/oracles.hpp"
#include "iva/rng.hpp"

using namespace iva;

namespace {
Instance single_item_instance(std::vector<double> signals,
                              ValuationFamilySpec spec = ValuationFamilySpec::max_signal()) {
  Instance instance;
  const int n = static_cast<int>(signals.size());
  instance.signals = SignalProfile(std::move(signals));
  instance.valuations = make_family(spec, n);
  instance.matroid = std::make_shared<UniformMatroid>(n, 1);
  return instance;
}
}  // namespace

TEST_CASE("brute_force_opt examples") {
  SUBCASE("single item picks the max value") {
    const auto instance = single_item_instance({1, 7, 3});
    const auto opt = brute_force_opt(instance.signals, instance.valuations, *instance.matroid);
    CHECK(opt.value == doctest::Approx(7));
  }
  SUBCASE("uniform(2) with values (1,3,2)") {
    Instance instance;
    instance.signals = SignalProfile({1, 3, 2});
    instance.valuations = make_family(
        ValuationFamilySpec::affine_resale({1, 1, 1}, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}), 3);
    instance.matroid = std::make_shared<UniformMatroid>(3, 2);
    const auto opt = brute_force_opt(instance.signals, instance.valuations, *instance.matroid);
    CHECK(opt.value == doctest::Approx(5));
    CHECK(opt.optimal_set == std::vector<int>{1, 2});
  }
  SUBCASE("graphic triangle with edge values (3,2,1)") {
    Instance instance;
    instance.signals = SignalProfile({3, 2, 1});
    instance.valuations = make_family(
        ValuationFamilySpec::affine_resale({1, 1, 1}, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}), 3);
    instance.matroid = std::make_shared<GraphicMatroid>(
        3, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {0, 2}});
    const auto opt = brute_force_opt(instance.signals, instance.valuations, *instance.matroid);
    CHECK(opt.value == doctest::Approx(5));
  }
  SUBCASE("agrees with greedy on random instances") {
    RandomStream rng(123);
    for (int it = 0; it < 50; ++it) {
      const int n = 2 + static_cast<int>(rng.uniform_int(5));
      std::vector<double> signals(static_cast<std::size_t>(n));
      for (double& s : signals) s = rng.uniform(0.0, 1.0);
      auto instance = single_item_instance(signals, ValuationFamilySpec::mineral_average());
      instance.matroid = std::make_shared<UniformMatroid>(n, 1 + static_cast<int>(rng.uniform_int(3)));
      const auto opt = brute_force_opt(instance.signals, instance.valuations, *instance.matroid);
      std::vector<double> values(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        values[static_cast<std::size_t>(i)] =
            instance.valuations[static_cast<std::size_t>(i)](instance.signals);
      }
      CHECK(greedy_max_weight(*instance.matroid, values).total_weight ==
            doctest::Approx(opt.value).epsilon(1e-12));
    }
  }
}

TEST_CASE("value grid spans [0, 2v] and contains the truth") {
  const auto grid = make_value_grid(3.0, 51);
  CHECK(grid.size() >= 51);
  CHECK(grid.front() == 0);
  CHECK(grid.back() == doctest::Approx(6.0));
  CHECK(std::find(grid.begin(), grid.end(), 3.0) != grid.end());
  CHECK(make_value_grid(0.0).back() == doctest::Approx(1.0));
}

TEST_CASE("eating audit on the reference pair") {
  const auto instance = single_item_instance({0, 1});
  for (int bidder = 0; bidder < 2; ++bidder) {
    const double truth = instance.valuations[static_cast<std::size_t>(bidder)](instance.signals);
    const auto audit = truthfulness_audit(MechanismKind::kEating, instance, bidder,
                                          make_value_grid(truth, 51));
    CHECK(audit.pass);
    CHECK(audit.allocation_monotone);
    CHECK(audit.truth_utility >= -1e-12);
  }
}

TEST_CASE("cp audit: threshold auction utilities") {
  const auto instance = single_item_instance({3, 5});
  MechanismParams params;
  params.d = 1;
  for (int bidder = 0; bidder < 2; ++bidder) {
    const double truth = instance.valuations[static_cast<std::size_t>(bidder)](instance.signals);
    const auto audit = truthfulness_audit(MechanismKind::kCp, instance, bidder,
                                          make_value_grid(truth, 51), params);
    CHECK(audit.pass);
    // truth utility is (v - theta)/(d+1) when winning: bidder 1 has theta 3
    if (bidder == 1) CHECK(audit.truth_utility == doctest::Approx((5.0 - 3.0) / 2));
  }
}

TEST_CASE("audit of a bidder below the entry threshold") {
  // max-signal: both bidders share the value 1, but bidder 0's process has a
  // strong competitor; deviations above entry would win at a loss, never a gain
  const auto instance = single_item_instance({0.01, 1});
  const double truth = instance.valuations[0](instance.signals);
  const auto audit =
      truthfulness_audit(MechanismKind::kEating, instance, 0, make_value_grid(truth, 51));
  CHECK(audit.pass);
  CHECK(audit.worst_gain <= 1e-9);
}

TEST_CASE("audit responses match full mechanism re-runs at misreports") {
  // replace bidder i's oracle with a constant at the deviating value and
  // re-run the whole mechanism: i's allocation and payment must match what
  // the audit computed from the scalar report alone
  RandomStream rng(60601);
  for (int it = 0; it < 20; ++it) {
    const int n = 2 + static_cast<int>(rng.uniform_int(4));
    std::vector<double> signals(static_cast<std::size_t>(n));
    for (double& s : signals) s = rng.uniform(0.0, 1.0);
    Instance instance;
    instance.signals = SignalProfile(signals);
    instance.valuations = make_family(ValuationFamilySpec::max_signal(), n);
    instance.matroid = std::make_shared<UniformMatroid>(n, 1);

    const int bidder = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    const double truth = instance.valuations[static_cast<std::size_t>(bidder)](instance.signals);
    WeightFunction w(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
      w[static_cast<std::size_t>(j)] =
          j == bidder ? truth
                      : shadow_value(instance.valuations[static_cast<std::size_t>(j)],
                                     instance.signals, bidder);
    }
    const auto curve = allocation_curve(w, bidder);
    const auto cw = critical_weight(*instance.matroid, bidder, w);

    for (int probe = 0; probe < 5; ++probe) {
      const double reported = rng.uniform(0.0, 2.0 * std::max(truth, 0.5));
      auto misreported = instance.valuations;
      misreported[static_cast<std::size_t>(bidder)] =
          ValuationOracle(bidder, [reported](const SignalProfile&) { return reported; });

      const auto eating = run_eating_mechanism(instance.signals, misreported);
      CHECK(eating.allocations[static_cast<std::size_t>(bidder)] ==
            doctest::Approx(curve.probability_at(reported)).epsilon(1e-10));
      CHECK(eating.payments[static_cast<std::size_t>(bidder)] ==
            doctest::Approx(payment_of(curve, reported)).epsilon(1e-10));

      const auto cp = run_cp(instance.signals, misreported, *instance.matroid, 1, 5);
      const bool expect_win = reported > cw.theta ||
                              (reported == cw.theta && cw.selected_at_theta);
      CHECK(cp.probabilities[static_cast<std::size_t>(bidder)] ==
            doctest::Approx(expect_win ? 0.5 : 0.0));
      CHECK(cp.payments[static_cast<std::size_t>(bidder)] ==
            doctest::Approx(expect_win ? cw.theta / 2 : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("misreporting below the threshold forfeits the win") {
  const auto instance = single_item_instance({3, 5});
  MechanismParams params;
  params.d = 1;
  // bidder 1 (true value 5, theta 3): utilities at reports 2 and 5
  const auto audit = truthfulness_audit(MechanismKind::kCp, instance, 1, {2.0, 5.0}, params);
  CHECK(audit.pass);
  CHECK(audit.truth_utility == doctest::Approx(1.0));  // (5-3)/2
}
