#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "iva/oracles.hpp"

namespace iva {

struct SignalDistribution {
  enum class Kind { kUniform, kExponential, kGrid };
  Kind kind = Kind::kUniform;
  double lo = 0;
  double hi = 1;
  double rate = 1;
  std::vector<double> values;  // grid kind: one of these per signal
};

struct ToleranceConfig {
  double feasibility = 1e-9;
  double welfare_ratio = 1e-9;
  double audit_gain = 1e-9;
};

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

struct ExperimentConfig {
  MechanismKind mechanism = MechanismKind::kEating;
  int n = 2;
  ValuationFamilySpec valuation;
  std::shared_ptr<const Matroid> matroid;  // defaults to uniform(1) (single item)
  SignalDistribution signals;
  int trials = 1;
  std::uint64_t seed = 0;
  bool seed_set = false;  // seed is mandatory; parse rejects configs without one
  int d = 1;
  std::optional<std::vector<int>> d_reports;  // cp-hetero; defaults to all d
  std::string out_dir;
  bool emit_traces = false;
  bool audit = false;
  bool certificates = false;
  ToleranceConfig tolerances;

  void validate() const;
  /// 1/5 for eating, 1/(d+1) for cp, 1/(2(dbar+1)) for cp-hetero.
  double theoretical_bound() const;
};

struct TrialRow {
  int trial = 0;
  std::string instance_hash;
  double opt = 0;
  double expected_welfare = 0;
  double ratio = 0;
  double feasibility_slack = 0;               // max(0, sum x - 1); 0 for CP (ex-post feasible)
  std::optional<double> certificate_bound;
  std::string audit_status = "skipped";       // pass | fail | skipped
  std::string error;                          // per-trial failure, campaign continues
};

struct ExperimentReport {
  std::vector<TrialRow> rows;
  double min_ratio = 0;
  double mean_ratio = 0;
  double worst_slack = 0;
  int errored_trials = 0;
  /// False when any row's ratio fell below the theoretical bound (minus
  /// tolerance) or feasibility slipped; a violation fails the whole campaign.
  bool bounds_ok = true;
};

/// Deterministic instance for (config, trial): signals from the declared
/// distribution on the (seed, trial) substream, oracles from make_family,
/// matroid from the spec.
Instance generate_instance(const ExperimentConfig& config, int trial);

/// Runs the selected mechanism per trial, computes OPT (enumeration up to
/// n = 12, greedy beyond), ratios, slacks, optional certificates and audits.
/// Writes report.csv / summary.json (and traces) under out_dir when set.
ExperimentReport run_campaign(const ExperimentConfig& config);

/// CSV rows (process_owner, bidder, start_time, share, stopping_time)
/// sufficient to redraw the eating trace; zero-weight bidders carry start
/// time "never".
void emit_trace(const EatingOutcome& outcome, std::ostream& out);
void emit_trace(const EatingOutcome& outcome, const std::string& path);

std::string report_csv(const ExperimentReport& report);

}  // namespace iva
