#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "iva/matroid.hpp"
#include "iva/rng.hpp"

using namespace iva;

namespace {
GraphicMatroid triangle() { return GraphicMatroid(3, {{0, 1}, {1, 2}, {0, 2}}); }

// not downward closed, so the two greedy scans reach maximal sets of
// different sizes
class BrokenOracle final : public Matroid {
 public:
  BrokenOracle() : Matroid(3) {}
  bool independent(std::uint64_t subset) const override {
    return subset == 0 || subset == 0b001 || subset == 0b011 || subset == 0b100;
  }
  std::string describe() const override { return "broken"; }
};
}  // namespace

TEST_CASE("rank basics") {
  const UniformMatroid u(5, 2);
  CHECK(rank(u, std::vector<int>{0, 1, 2}) == 2);
  CHECK(rank(u, std::vector<int>{}) == 0);
  CHECK(rank(triangle(), std::vector<int>{0, 1, 2}) == 2);  // spanning tree of a 3-cycle
}

TEST_CASE("rank flags a corrupt oracle") {
  CHECK_THROWS_AS(rank(BrokenOracle(), std::vector<int>{0, 1, 2}), MatroidAxiomError);
}

TEST_CASE("rank submodularity on sampled chains") {
  const auto m = materialize(triangle());
  RandomStream rng(7);
  for (int it = 0; it < 200; ++it) {
    const std::uint64_t small = rng.next_u64() & 0b111;
    const std::uint64_t large = small | (rng.next_u64() & 0b111);
    for (int e = 0; e < 3; ++e) {
      const std::uint64_t b = std::uint64_t{1} << e;
      CHECK(rank(m, small | b) - rank(m, small) >= rank(m, large | b) - rank(m, large));
    }
  }
}

TEST_CASE("greedy examples with the lower-index tie rule") {
  SUBCASE("tie favors lower index") {
    const auto r = greedy_max_weight(UniformMatroid(2, 1), {5, 5});
    CHECK(r.selected == std::vector<int>{0});
  }
  SUBCASE("top two by weight") {
    const auto r = greedy_max_weight(UniformMatroid(3, 2), {1, 3, 2});
    auto sorted = r.selected;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{1, 2});
    CHECK(r.total_weight == doctest::Approx(5));
  }
  SUBCASE("max-weight forest of the triangle") {
    const auto r = greedy_max_weight(triangle(), {3, 2, 1});
    auto sorted = r.selected;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1});
  }
  SUBCASE("greedy returns rank many elements even at zero weight") {
    const auto r = greedy_max_weight(UniformMatroid(3, 2), {0, 0, 0});
    CHECK(r.selected == std::vector<int>{0, 1});
  }
}

TEST_CASE("critical_weight examples") {
  SUBCASE("single item, tie won by lower index") {
    const auto cw = critical_weight(UniformMatroid(2, 1), 0, {0, 5});
    CHECK(cw.theta == doctest::Approx(5));
    CHECK(cw.selected_at_theta);
  }
  SUBCASE("single item, tie lost by higher index") {
    const auto cw = critical_weight(UniformMatroid(2, 1), 1, {5, 0});
    CHECK(cw.theta == doctest::Approx(5));
    CHECK_FALSE(cw.selected_at_theta);
  }
  SUBCASE("triangle edge spanned by the other two") {
    const auto cw = critical_weight(triangle(), 2, {3, 2, 0});
    CHECK(cw.theta == doctest::Approx(2));
    CHECK_FALSE(cw.selected_at_theta);
  }
  SUBCASE("element never spanned") {
    const auto cw = critical_weight(UniformMatroid(2, 2), 0, {0, 5});
    CHECK(cw.theta == 0);
    CHECK(cw.selected_at_theta);
  }
  SUBCASE("a loop is never selected") {
    const GraphicMatroid loop(2, {{0, 0}, {0, 1}});
    const auto cw = critical_weight(loop, 0, {0, 1});
    CHECK(std::isinf(cw.theta));
    CHECK_FALSE(cw.selected_at_theta);
  }
}

TEST_CASE("critical_weight agrees with a bisection over greedy") {
  RandomStream rng(99);
  const auto matroids = std::vector<ExplicitMatroid>{
      materialize(triangle()), materialize(UniformMatroid(5, 2)),
      materialize(PartitionMatroid({{0, 1}, {2, 3, 4}}, {1, 2}))};
  for (int it = 0; it < 200; ++it) {
    const auto& m = matroids[rng.uniform_int(matroids.size())];
    WeightFunction w(static_cast<std::size_t>(m.size()));
    for (double& x : w) x = rng.uniform(0.0, 2.0);
    const int i = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(m.size())));
    const auto cw = critical_weight(m, i, w);
    if (std::isinf(cw.theta)) {
      CHECK_FALSE(greedy_selects_at(m, i, w, 1e9));
      continue;
    }
    // bisect the selection step of v -> i in greedy(w with w_i = v)
    auto selected = [&](double v) {
      WeightFunction probe = w;
      probe[static_cast<std::size_t>(i)] = v;
      return greedy_max_weight(m, probe).contains(i);
    };
    double lo = 0, hi = 4;
    if (selected(lo)) {
      CHECK(cw.theta <= 1e-9);
    } else {
      REQUIRE(selected(hi));
      for (int step = 0; step < 60; ++step) {
        const double mid = (lo + hi) / 2;
        (selected(mid) ? hi : lo) = mid;
      }
      CHECK(cw.theta == doctest::Approx(hi).epsilon(1e-9));
    }
    // the step function itself matches at probes around theta
    CHECK(greedy_selects_at(m, i, w, cw.theta + 1e-6) == selected(cw.theta + 1e-6));
    CHECK(greedy_selects_at(m, i, w, std::max(0.0, cw.theta - 1e-6)) ==
          selected(std::max(0.0, cw.theta - 1e-6)));
  }
}

TEST_CASE("verify_partition_condition examples") {
  SUBCASE("two singletons in a rank-1 matroid") {
    CHECK(verify_partition_condition(UniformMatroid(2, 1), {0, 1}, 2).pass);
  }
  SUBCASE("three elements cannot fit two rank-1 slots") {
    const auto result = verify_partition_condition(UniformMatroid(3, 1), {0, 1, 2}, 2);
    CHECK_FALSE(result.pass);
    CHECK(result.violating_subset == std::vector<int>{0, 1, 2});
  }
  SUBCASE("triangle splits into two forests") {
    CHECK(verify_partition_condition(triangle(), {0, 1, 2}, 2).pass);
  }
}

TEST_CASE("partition_into examples") {
  SUBCASE("two singletons") {
    const auto p = partition_into(UniformMatroid(2, 1), {0, 1}, 2);
    REQUIRE(p.parts.size() == 2);
    CHECK(p.parts[0] == std::vector<int>{0});
    CHECK(p.parts[1] == std::vector<int>{1});
  }
  SUBCASE("triangle into two forests, deterministic") {
    const auto p = partition_into(triangle(), {0, 1, 2}, 2);
    REQUIRE(p.parts.size() == 2);
    CHECK(p.parts[0] == std::vector<int>{0, 1});
    CHECK(p.parts[1] == std::vector<int>{2});
  }
  SUBCASE("already independent set with t = 1") {
    const auto p = partition_into(UniformMatroid(4, 3), {0, 2, 3}, 1);
    REQUIRE(p.parts.size() == 1);
    CHECK(p.parts[0] == std::vector<int>{0, 2, 3});
  }
  SUBCASE("infeasible input throws with a certificate") {
    try {
      partition_into(UniformMatroid(3, 1), {0, 1, 2}, 2);
      FAIL("expected PartitionInfeasible");
    } catch (const PartitionInfeasible& e) {
      CHECK(e.violating_subset() == std::vector<int>{0, 1, 2});
      CHECK(e.parts() == 2);
    }
  }
}

TEST_CASE("partition_into invariants on random instances") {
  RandomStream rng(31337);
  for (int it = 0; it < 100; ++it) {
    const int n = 4 + static_cast<int>(rng.uniform_int(4));
    const int vertices = 3 + static_cast<int>(rng.uniform_int(3));
    std::vector<std::pair<int, int>> edges;
    for (int e = 0; e < n; ++e) {
      int u = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(vertices)));
      int w = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(vertices)));
      if (u == w) w = (w + 1) % vertices;
      edges.emplace_back(u, w);
    }
    const GraphicMatroid m(vertices, edges);
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) all[static_cast<std::size_t>(e)] = e;
    for (int t = 1; t <= 3; ++t) {
      const auto condition = verify_partition_condition(m, all, t);
      if (!condition.pass) continue;
      const auto p = partition_into(m, all, t);
      CHECK(static_cast<int>(p.parts.size()) <= t);
      std::vector<int> covered;
      for (const auto& part : p.parts) {
        CHECK(m.independent(part));
        covered.insert(covered.end(), part.begin(), part.end());
      }
      std::sort(covered.begin(), covered.end());
      CHECK(covered == all);
    }
  }
}

TEST_CASE("before_still_selected on random perturbations") {
  RandomStream rng(555);
  const auto m = materialize(GraphicMatroid(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}}));
  for (int it = 0; it < 300; ++it) {
    WeightFunction w(static_cast<std::size_t>(m.size()));
    for (double& x : w) x = rng.uniform(0.0, 1.0);
    const auto greedy = greedy_max_weight(m, w);
    REQUIRE(!greedy.selected.empty());
    const int i = greedy.selected[rng.uniform_int(greedy.selected.size())];
    WeightFunction perturbed = w;
    perturbed[static_cast<std::size_t>(i)] += rng.uniform(0.0, 0.5);
    for (int j = 0; j < m.size(); ++j) {
      if (j != i) perturbed[static_cast<std::size_t>(j)] *= rng.uniform01();
    }
    CHECK(greedy_max_weight(m, perturbed).contains(i));
  }
}

TEST_CASE("explicit matroid axiom verification") {
  SUBCASE("valid family accepted") {
    const ExplicitMatroid m(2, std::vector<std::vector<int>>{{}, {0}, {1}});
    CHECK(m.independent(std::vector<int>{0}));
    CHECK_FALSE(m.independent(std::vector<int>{0, 1}));
  }
  SUBCASE("missing empty set rejected") {
    CHECK_THROWS_AS(ExplicitMatroid(2, std::vector<std::vector<int>>{{0}}), MatroidAxiomError);
  }
  SUBCASE("not downward closed rejected") {
    CHECK_THROWS_AS(ExplicitMatroid(2, std::vector<std::vector<int>>{{}, {0, 1}}),
                    MatroidAxiomError);
  }
  SUBCASE("exchange violation rejected") {
    // {2} cannot be extended from {0,1}
    CHECK_THROWS_AS(
        ExplicitMatroid(3, std::vector<std::vector<int>>{{}, {0}, {1}, {2}, {0, 1}}),
        MatroidAxiomError);
  }
}

TEST_CASE("linear matroid over exact rationals") {
  // columns [1,0], [0,1], [1,1], [2,2]: {2,3} parallel, {0,1,2} dependent
  const LinearMatroid m(4, {{{1, 1}, {0, 1}, {1, 1}, {2, 1}},
                            {{0, 1}, {1, 1}, {1, 1}, {2, 1}}});
  CHECK(m.independent(std::vector<int>{0, 1}));
  CHECK(m.independent(std::vector<int>{0, 2}));
  CHECK_FALSE(m.independent(std::vector<int>{0, 1, 2}));
  CHECK_FALSE(m.independent(std::vector<int>{2, 3}));
  CHECK(rank(m, std::vector<int>{0, 1, 2, 3}) == 2);
  // materialize re-verifies the axioms
  CHECK_NOTHROW(materialize(m));
}

TEST_CASE("greedy equals enumeration on random explicit matroids") {
  RandomStream rng(2718);
  const auto m = materialize(UniformMatroid(6, 3));
  const auto g = materialize(GraphicMatroid(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}, {1, 3}}));
  for (const Matroid* matroid : {static_cast<const Matroid*>(&m), static_cast<const Matroid*>(&g)}) {
    for (int it = 0; it < 50; ++it) {
      WeightFunction w(static_cast<std::size_t>(matroid->size()));
      for (double& x : w) x = rng.uniform(0.0, 1.0);
      const auto greedy = greedy_max_weight(*matroid, w);
      double best = 0;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << matroid->size()); ++mask) {
        if (!matroid->independent(mask)) continue;
        double total = 0;
        for (int e = 0; e < matroid->size(); ++e) {
          if (mask & (std::uint64_t{1} << e)) total += w[static_cast<std::size_t>(e)];
        }
        best = std::max(best, total);
      }
      CHECK(greedy.total_weight == doctest::Approx(best).epsilon(1e-12));
    }
  }
}
