#include <doctest.h>

#include <cmath>
#include <sstream>

#include "iva/eating.hpp"
#include "iva/harness.hpp"
#include "iva/json_io.hpp"

using namespace iva;
using nlohmann::json;

namespace {
json base_config() {
  return json{{"mechanism", "eating"},
              {"valuation", {{"family", "max-signal"}, {"n", 4}}},
              {"signals", {{"dist", "uniform"}, {"lo", 0.0}, {"hi", 1.0}}},
              {"trials", 25},
              {"seed", 42}};
}
}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("valid config round-trips the fields") {
    const auto config = parse_config(base_config());
    CHECK(config.n == 4);
    CHECK(config.trials == 25);
    CHECK(config.seed == 42);
    CHECK(config.mechanism == MechanismKind::kEating);
  }
  SUBCASE("zero trials rejected at parse") {
    auto bad = base_config();
    bad["trials"] = 0;
    CHECK_THROWS(parse_config(bad));
  }
  SUBCASE("missing seed rejected") {
    auto bad = base_config();
    bad.erase("seed");
    CHECK_THROWS(parse_config(bad));
  }
  SUBCASE("matroid specs parse for every kind") {
    for (const json spec :
         {json{{"kind", "uniform"}, {"params", {{"n", 3}, {"k", 2}}}},
          json{{"kind", "partition"},
               {"params", {{"blocks", {{0, 1}, {2}}}, {"capacities", {1, 1}}}}},
          json{{"kind", "graphic"},
               {"params", {{"vertices", 3}, {"edges", {{0, 1}, {1, 2}, {0, 2}}}}}},
          json{{"kind", "linear"}, {"params", {{"matrix", {{1, 0, "1/2"}, {0, 1, 1}}}}}},
          json{{"kind", "explicit"},
               {"params", {{"n", 2}, {"independent", {json::array(), {0}, {1}}}}}}}) {
      const auto m = parse_matroid_spec(spec);
      CHECK(m->size() == 3 - (spec.at("kind") == "explicit" ? 1 : 0));
    }
  }
}

TEST_CASE("generate_instance determinism") {
  const auto config = parse_config(base_config());
  const auto a = generate_instance(config, 0);
  const auto b = generate_instance(config, 0);
  CHECK(a.signals.values() == b.signals.values());
  const auto c = generate_instance(config, 1);
  CHECK(a.signals.values() != c.signals.values());
}

TEST_CASE("grid distribution with zero exercises shadow edge cases") {
  auto cfg = base_config();
  cfg["signals"] = json{{"dist", "grid"}, {"values", {0.0, 0.5, 1.0}}};
  cfg["trials"] = 50;
  const auto config = parse_config(cfg);
  bool found_zero = false;
  for (int trial = 0; trial < 50 && !found_zero; ++trial) {
    const auto instance = generate_instance(config, trial);
    for (double s : instance.signals.values()) found_zero |= s == 0.0;
  }
  CHECK(found_zero);
}

TEST_CASE("eating campaign meets the welfare bound") {
  auto cfg = base_config();
  cfg["trials"] = 60;
  cfg["audit"] = true;
  cfg["certificates"] = true;
  const auto config = parse_config(cfg);
  const auto report = run_campaign(config);
  CHECK(report.bounds_ok);
  CHECK(report.errored_trials == 0);
  CHECK(report.min_ratio >= 0.2 - 1e-9);
  CHECK(report.worst_slack <= 1e-9);
  for (const auto& row : report.rows) {
    CHECK(row.audit_status == "pass");
    REQUIRE(row.certificate_bound.has_value());
    CHECK(*row.certificate_bound <= 4.0 + 1e-9);
  }
}

TEST_CASE("cp campaign with max-signal meets OPT/2") {
  json cfg{{"mechanism", "cp"},
           {"valuation", {{"family", "max-signal"}, {"n", 5}}},
           {"matroid", {{"kind", "uniform"}, {"params", {{"n", 5}, {"k", 2}}}}},
           {"signals", {{"dist", "exponential"}, {"rate", 1.0}}},
           {"trials", 40},
           {"seed", 7},
           {"d", 1}};
  const auto report = run_campaign(parse_config(cfg));
  CHECK(report.bounds_ok);
  CHECK(report.min_ratio >= 0.5 - 1e-9);
}

TEST_CASE("reports are byte-identical for identical config and seed") {
  const auto config = parse_config(base_config());
  const auto first = report_csv(run_campaign(config));
  const auto second = report_csv(run_campaign(config));
  CHECK(first == second);
  CHECK(first.find("trial,instance_hash,opt") == 0);
}

TEST_CASE("trace export") {
  SUBCASE("single bidder trace") {
    ValuationOracle v(0, [](const SignalProfile&) { return 2.0; });
    const auto outcome = run_eating_mechanism(SignalProfile({1}), {v});
    std::ostringstream out;
    emit_trace(outcome, out);
    const std::string text = out.str();
    CHECK(text.find("process_owner,bidder,start_time,share,stopping_time") == 0);
    CHECK(text.find("0,0,") != std::string::npos);
    // start time is -ln 2
    CHECK(text.find("-0.69314718") != std::string::npos);
  }
  SUBCASE("hand-solved two-bidder process appears in the trace") {
    // weights (1, e^{-1/2}) arise when the shadow of bidder 1 is e^{-1/2}
    EatingOutcome outcome;
    outcome.weights = {{1.0, std::exp(-0.5)}};
    outcome.processes = {eat(outcome.weights[0])};
    outcome.allocations = {outcome.processes[0].shares[0] / 4};
    outcome.payments = {0};
    std::ostringstream out;
    emit_trace(outcome, out);
    std::istringstream lines(out.str());
    std::string header, row0, row1;
    std::getline(lines, header);
    std::getline(lines, row0);
    std::getline(lines, row1);
    auto fields = [](const std::string& row) {
      std::vector<std::string> parts;
      std::istringstream stream(row);
      std::string part;
      while (std::getline(stream, part, ',')) parts.push_back(part);
      return parts;
    };
    const auto f0 = fields(row0), f1 = fields(row1);
    REQUIRE(f0.size() == 5);
    CHECK(std::stod(f0[2]) == doctest::Approx(0));     // start of the true-value bidder
    CHECK(std::stod(f0[3]) == doctest::Approx(0.75));  // its share
    CHECK(std::stod(f1[2]) == doctest::Approx(0.5));   // shadow bidder starts at 1/2
    CHECK(std::stod(f1[3]) == doctest::Approx(0.25));
    CHECK(std::stod(f1[4]) == doctest::Approx(0.75));  // stopping time
  }
  SUBCASE("zero-weight bidder is flagged as never starting") {
    EatingOutcome outcome;
    outcome.weights = {{1.0, 0.0}};
    outcome.processes = {eat(outcome.weights[0])};
    outcome.allocations = {0.25};
    outcome.payments = {0};
    std::ostringstream out;
    emit_trace(outcome, out);
    CHECK(out.str().find("0,1,never,0,1") != std::string::npos);
  }
}

TEST_CASE("summary JSON carries the schema version and bound") {
  const auto config = parse_config(base_config());
  const auto report = run_campaign(config);
  const auto summary = report_summary_json(report, config);
  CHECK(summary.at("schema_version") == kReportSchemaVersion);
  CHECK(summary.at("theoretical_bound") == doctest::Approx(0.2));
  CHECK(summary.at("bounds_ok") == true);
}
