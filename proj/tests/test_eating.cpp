#include <doctest.h>

#include <cmath>
#include <functional>

#include "iva/eating.hpp"
#include "iva/rng.hpp"

using namespace iva;

namespace {
// adaptive Simpson quadrature, the numeric cross-check for the closed-form
// payment integrals
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fb,
               double fm, double whole, double tol, int depth) {
  const double m = (a + b) / 2;
  const double lm = (a + m) / 2, rm = (m + b) / 2;
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15 * tol) {
    return left + right + (left + right - whole) / 15;
  }
  return simpson(f, a, m, fa, fm, flm, left, tol / 2, depth - 1) +
         simpson(f, m, b, fm, fb, frm, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-11) {
  if (b <= a) return 0;
  const double fa = f(a), fb = f(b), fm = f((a + b) / 2);
  const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return simpson(f, a, b, fa, fb, fm, whole, tol, 40);
}

std::vector<ValuationOracle> max_family(int n) {
  return make_family(ValuationFamilySpec::max_signal(), n);
}
}  // namespace

TEST_CASE("eat closed-form examples") {
  SUBCASE("single eater consumes everything") {
    const auto r = eat({std::exp(1.0)});
    CHECK(*r.stopping_time == doctest::Approx(0));
    CHECK(r.shares[0] == doctest::Approx(1));
  }
  SUBCASE("symmetric pair") {
    const auto r = eat({1, 1});
    CHECK(*r.stopping_time == doctest::Approx(0.5));
    CHECK(r.shares[0] == doctest::Approx(0.5));
    CHECK(r.shares[1] == doctest::Approx(0.5));
  }
  SUBCASE("staggered starts") {
    const auto r = eat({1, std::exp(-0.5)});
    CHECK(*r.stopping_time == doctest::Approx(0.75));
    CHECK(r.shares[0] == doctest::Approx(0.75));
    CHECK(r.shares[1] == doctest::Approx(0.25));
    REQUIRE(r.breakpoints.size() == 2);
    CHECK(r.breakpoints[0].second == 0);
    CHECK(r.breakpoints[1].first == doctest::Approx(0.5));
  }
  SUBCASE("zero weight never starts") {
    const auto r = eat({1, 0});
    CHECK(r.shares[0] == doctest::Approx(1));
    CHECK(r.shares[1] == 0);
  }
  SUBCASE("all-zero weights are flagged") {
    const auto r = eat({0, 0});
    CHECK_FALSE(r.stopping_time.has_value());
    CHECK(r.shares == std::vector<double>{0, 0});
  }
  SUBCASE("negative weight rejected") { CHECK_THROWS(eat({1, -0.5})); }
}

TEST_CASE("eat shares always sum to one") {
  RandomStream rng(4242);
  for (int it = 0; it < 200; ++it) {
    const int n = 1 + static_cast<int>(rng.uniform_int(8));
    WeightFunction w(static_cast<std::size_t>(n));
    for (double& x : w) x = rng.uniform01() < 0.2 ? 0.0 : std::exp(rng.uniform(-3, 3));
    bool any = false;
    for (double x : w) any |= x > 0;
    if (!any) continue;
    const auto r = eat(w);
    double total = 0;
    for (double y : r.shares) {
      CHECK(y >= 0);
      CHECK(y <= 1 + 1e-12);
      total += y;
    }
    CHECK(total == doctest::Approx(1).epsilon(1e-12));
  }
}

TEST_CASE("eat monotonicity in own and others' weights") {
  RandomStream rng(515);
  for (int it = 0; it < 200; ++it) {
    const int n = 2 + static_cast<int>(rng.uniform_int(5));
    WeightFunction w(static_cast<std::size_t>(n));
    for (double& x : w) x = std::exp(rng.uniform(-2, 2));
    const int i = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    const double base = eat(w).shares[static_cast<std::size_t>(i)];
    WeightFunction up = w;
    up[static_cast<std::size_t>(i)] *= 1.3;
    CHECK(eat(up).shares[static_cast<std::size_t>(i)] >= base - 1e-12);
    WeightFunction rival = w;
    const int j = (i + 1) % n;
    rival[static_cast<std::size_t>(j)] *= 1.3;
    CHECK(eat(rival).shares[static_cast<std::size_t>(i)] <= base + 1e-12);
  }
}

TEST_CASE("run_eating_mechanism reference instances") {
  SUBCASE("single bidder gets share 1 and pays nothing") {
    ValuationOracle v(0, [](const SignalProfile&) { return 7.0; });
    const auto outcome = run_eating_mechanism(SignalProfile({3}), {v});
    CHECK(outcome.allocations[0] == doctest::Approx(0.25));
    CHECK(outcome.payments[0] == doctest::Approx(0));
  }
  SUBCASE("two max-signal bidders at s = (0, 1)") {
    const auto outcome = run_eating_mechanism(SignalProfile({0, 1}), max_family(2));
    CHECK(outcome.allocations[0] == doctest::Approx(1.0 / 8));
    CHECK(outcome.allocations[1] == doctest::Approx(1.0 / 4));
    CHECK(outcome.feasible);
  }
  SUBCASE("symmetric bidders get equal shares") {
    const auto outcome = run_eating_mechanism(SignalProfile({2, 2, 2}), max_family(3));
    CHECK(outcome.allocations[0] == doctest::Approx(outcome.allocations[1]));
    CHECK(outcome.allocations[1] == doctest::Approx(outcome.allocations[2]));
  }
  SUBCASE("zero value gets nothing and pays nothing") {
    const auto outcome = run_eating_mechanism(SignalProfile({0, 0}), max_family(2));
    CHECK(outcome.allocations[0] == 0);
    CHECK(outcome.payments[0] == 0);
  }
}

TEST_CASE("allocation_curve closed forms") {
  SUBCASE("no competitors: constant full share") {
    const auto curve = allocation_curve({0.0, 0.0}, 0);
    REQUIRE(curve.segments().size() == 1);
    CHECK(curve.entry_value() == 0);
    CHECK(curve.share_at(0.01) == doctest::Approx(1));
    CHECK(curve.share_at(100) == doctest::Approx(1));
  }
  SUBCASE("one unit-weight competitor") {
    // y = 0 up to e^{-1}, then (1 + ln v)/2 until v = e, then 1
    const auto curve = allocation_curve({0.0, 1.0}, 0);
    CHECK(curve.entry_value() == doctest::Approx(std::exp(-1.0)));
    CHECK(curve.share_at(std::exp(-1.0)) == doctest::Approx(0));
    CHECK(curve.share_at(1.0) == doctest::Approx(0.5));
    CHECK(curve.share_at(std::exp(1.0)) == doctest::Approx(1));
    CHECK(curve.share_at(10.0) == doctest::Approx(1));
    CHECK(curve.share_at(2.0) == doctest::Approx((1 + std::log(2.0)) / 2));
  }
}

TEST_CASE("allocation_curve matches eat() pointwise") {
  RandomStream rng(616);
  for (int it = 0; it < 50; ++it) {
    const int n = 2 + static_cast<int>(rng.uniform_int(5));
    WeightFunction w(static_cast<std::size_t>(n));
    for (double& x : w) x = rng.uniform01() < 0.2 ? 0.0 : std::exp(rng.uniform(-2, 2));
    const int i = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    const auto curve = allocation_curve(w, i);
    double previous = 0;
    for (int sample = 0; sample < 100; ++sample) {
      const double v = std::exp(rng.uniform(-4, 4));
      WeightFunction probe = w;
      probe[static_cast<std::size_t>(i)] = v;
      CHECK(curve.share_at(v) ==
            doctest::Approx(eat(probe).shares[static_cast<std::size_t>(i)]).epsilon(1e-10));
    }
    // non-decreasing along an increasing sweep
    for (double v = 0.01; v < 20; v *= 1.37) {
      const double y = curve.share_at(v);
      CHECK(y >= previous - 1e-12);
      previous = y;
    }
  }
}

TEST_CASE("allocation_curve with tied competitors") {
  // two unit-weight competitors tie at start time 0; the middle segment is
  // empty and the curve jumps straight from three active eaters to alone
  const auto curve = allocation_curve({0.0, 1.0, 1.0}, 0);
  CHECK(curve.entry_value() == doctest::Approx(std::exp(-0.5)));
  CHECK(curve.share_at(1.0) == doctest::Approx(1.0 / 3));
  CHECK(curve.share_at(std::exp(1.0)) == doctest::Approx(1.0));
  for (double v : {0.7, 1.0, 2.0, 2.7, 3.0, 10.0}) {
    CHECK(curve.share_at(v) == doctest::Approx(eat({v, 1.0, 1.0}).shares[0]).epsilon(1e-12));
  }
}

TEST_CASE("payment_of closed forms and quadrature cross-check") {
  SUBCASE("constant allocation pays nothing") {
    const auto curve = allocation_curve({0.0, 0.0}, 0);
    CHECK(payment_of(curve, 5.0) == doctest::Approx(0));
  }
  SUBCASE("hand-computed two-bidder payment at v = 1") {
    const auto curve = allocation_curve({0.0, 1.0}, 0);
    // p = 1/8 - (1/4) * int_{1/e}^{1} (1 + ln t)/2 dt = (1 - 1/e)/8
    CHECK(payment_of(curve, 1.0) == doctest::Approx((1 - std::exp(-1.0)) / 8).epsilon(1e-12));
  }
  SUBCASE("quadrature agrees on random curves") {
    RandomStream rng(717);
    for (int it = 0; it < 25; ++it) {
      const int n = 2 + static_cast<int>(rng.uniform_int(4));
      WeightFunction w(static_cast<std::size_t>(n));
      for (double& x : w) x = std::exp(rng.uniform(-2, 2));
      const auto curve = allocation_curve(w, 0);
      const double v = std::exp(rng.uniform(-2, 2));
      const double numeric =
          integrate([&](double t) { return curve.probability_at(t); }, 0.0, v);
      const double closed = curve.probability_at(v) * v - payment_of(curve, v);
      CHECK(closed == doctest::Approx(numeric).epsilon(1e-9));
    }
  }
  SUBCASE("payments stay inside [0, x v]") {
    RandomStream rng(818);
    for (int it = 0; it < 100; ++it) {
      const auto curve = allocation_curve({std::exp(rng.uniform(-2, 2)), 0.3, 1.7}, 1);
      const double v = std::exp(rng.uniform(-3, 3));
      const double p = payment_of(curve, v);
      CHECK(p >= 0);
      CHECK(p <= curve.probability_at(v) * v + 1e-12);
    }
  }
}

TEST_CASE("feasibility margin shrinks with the normalizer") {
  // symmetric affine instance: with the default 4 the mechanism is feasible,
  // with normalizer 1 it is not
  const auto family = make_family(
      ValuationFamilySpec::affine_resale({1, 1}, {{0, 1}, {1, 0}}), 2);
  const SignalProfile s({1, 1});
  const auto standard = run_eating_mechanism(s, family);
  CHECK(standard.feasible);
  EatingConfig tight;
  tight.normalizer = 1.0;
  const auto probed = run_eating_mechanism(s, family, tight);
  CHECK_FALSE(probed.feasible);
  CHECK(probed.total_allocation > 1.0 + 1e-9);
}
