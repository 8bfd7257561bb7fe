#include "iva/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "iva/certificate.hpp"
#include "iva/json_io.hpp"
#include "iva/rng.hpp"

namespace iva {

namespace {
std::string format_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

// FNV-1a over the raw signal bytes plus the structural tags
std::string instance_hash(const Instance& instance, const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix_bytes = [&h](const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (double s : instance.signals.values()) mix_bytes(&s, sizeof(s));
  const std::string family = config.valuation.family_name();
  mix_bytes(family.data(), family.size());
  const std::string matroid = instance.matroid->describe();
  mix_bytes(matroid.data(), matroid.size());
  char buffer[20];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}
}  // namespace

void ExperimentConfig::validate() const {
  require(trials >= 1, "trial count must be >= 1");
  require(seed_set, "seed is mandatory for reproducibility");
  require(n >= 1, "need at least one bidder");
  require(d >= 0, "criticality bound must be non-negative");
  if (signals.kind == SignalDistribution::Kind::kUniform) {
    require(signals.lo >= 0 && signals.hi >= signals.lo, "uniform range must be valid, >= 0");
  } else if (signals.kind == SignalDistribution::Kind::kExponential) {
    require(signals.rate > 0, "exponential rate must be positive");
  } else {
    require(!signals.values.empty(), "grid distribution needs values");
    for (double x : signals.values) require(x >= 0, "grid values must be non-negative");
  }
  if (d_reports) {
    require(static_cast<int>(d_reports->size()) == n, "one d report per bidder");
    for (int r : *d_reports) require(r >= 0, "d reports must be non-negative");
  }
}

double ExperimentConfig::theoretical_bound() const {
  switch (mechanism) {
    case MechanismKind::kEating: return 0.2;
    case MechanismKind::kCp: return 1.0 / (d + 1);
    case MechanismKind::kCpHetero: {
      HeteroDReport reports{d_reports.value_or(std::vector<int>(static_cast<std::size_t>(n), d))};
      return 0.5 / (reports.max_excluding(reports.argmax()) + 1);
    }
  }
  return 0;
}

Instance generate_instance(const ExperimentConfig& config, int trial) {
  config.validate();
  RandomStream rng(config.seed, static_cast<std::uint64_t>(trial));
  std::vector<double> signals(static_cast<std::size_t>(config.n));
  for (double& s : signals) {
    switch (config.signals.kind) {
      case SignalDistribution::Kind::kUniform:
        s = rng.uniform(config.signals.lo, config.signals.hi);
        break;
      case SignalDistribution::Kind::kExponential:
        s = rng.exponential(config.signals.rate);
        break;
      case SignalDistribution::Kind::kGrid:
        s = config.signals.values[rng.uniform_int(config.signals.values.size())];
        break;
    }
  }
  Instance instance;
  instance.signals = SignalProfile(std::move(signals));
  instance.valuations = make_family(config.valuation, config.n);
  instance.matroid = config.matroid ? config.matroid
                                    : std::make_shared<UniformMatroid>(config.n, 1);
  require(instance.matroid->size() == config.n, "matroid/bidder dimension mismatch");
  return instance;
}

namespace {
struct TrialOutcome {
  double expected_welfare = 0;
  double feasibility_slack = 0;
  std::optional<double> certificate_bound;
  std::optional<EatingOutcome> eating;
};

TrialOutcome run_trial_mechanism(const ExperimentConfig& config, const Instance& instance,
                                 int trial) {
  TrialOutcome out;
  switch (config.mechanism) {
    case MechanismKind::kEating: {
      EatingOutcome outcome = run_eating_mechanism(instance.signals, instance.valuations);
      out.expected_welfare = outcome.expected_welfare(instance.signals, instance.valuations);
      out.feasibility_slack = std::max(0.0, outcome.total_allocation - 1.0);
      if (config.certificates) {
        out.certificate_bound =
            build_dual_certificate(instance.signals, instance.valuations).bound;
      }
      out.eating = std::move(outcome);
      break;
    }
    case MechanismKind::kCp: {
      CPOutcome outcome = run_cp(instance.signals, instance.valuations, *instance.matroid,
                                 config.d, config.seed + static_cast<std::uint64_t>(trial));
      out.expected_welfare = outcome.expected_welfare(instance.signals, instance.valuations);
      break;
    }
    case MechanismKind::kCpHetero: {
      HeteroDReport reports{config.d_reports.value_or(
          std::vector<int>(static_cast<std::size_t>(config.n), config.d))};
      CPOutcome outcome =
          run_cp_hetero(instance.signals, instance.valuations, *instance.matroid, reports,
                        config.seed + static_cast<std::uint64_t>(trial));
      out.expected_welfare = outcome.expected_welfare(instance.signals, instance.valuations);
      break;
    }
  }
  return out;
}

MechanismParams audit_params(const ExperimentConfig& config) {
  MechanismParams params;
  params.d = config.d;
  if (config.mechanism == MechanismKind::kCpHetero) {
    params.reports = HeteroDReport{config.d_reports.value_or(
        std::vector<int>(static_cast<std::size_t>(config.n), config.d))};
  }
  return params;
}
}  // namespace

ExperimentReport run_campaign(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.min_ratio = std::numeric_limits<double>::infinity();
  double ratio_sum = 0;

  const bool write_files = !config.out_dir.empty();
  if (write_files) {
    std::filesystem::create_directories(config.out_dir);
    if (config.emit_traces) {
      std::filesystem::create_directories(std::filesystem::path(config.out_dir) / "traces");
    }
  }

  for (int trial = 0; trial < config.trials; ++trial) {
    TrialRow row;
    row.trial = trial;
    try {
      Instance instance = generate_instance(config, trial);
      row.instance_hash = instance_hash(instance, config);

      double opt;
      if (config.n <= 12) {
        opt = brute_force_opt(instance.signals, instance.valuations, *instance.matroid).value;
      } else {
        // greedy is provably optimal for matroids; enumeration stays as the
        // small-n cross-check
        std::vector<double> values(static_cast<std::size_t>(config.n));
        for (int i = 0; i < config.n; ++i) {
          values[static_cast<std::size_t>(i)] =
              instance.valuations[static_cast<std::size_t>(i)](instance.signals);
        }
        opt = greedy_max_weight(*instance.matroid, values).total_weight;
      }
      row.opt = opt;

      TrialOutcome outcome = run_trial_mechanism(config, instance, trial);
      row.expected_welfare = outcome.expected_welfare;
      row.feasibility_slack = outcome.feasibility_slack;
      row.certificate_bound = outcome.certificate_bound;
      row.ratio = opt > 0 ? outcome.expected_welfare / opt : 1.0;

      if (config.audit) {
        MechanismParams params = audit_params(config);
        bool all_pass = true;
        for (int bidder = 0; bidder < config.n && all_pass; ++bidder) {
          const double truth =
              instance.valuations[static_cast<std::size_t>(bidder)](instance.signals);
          all_pass = truthfulness_audit(config.mechanism, instance, bidder,
                                        make_value_grid(truth), params)
                         .pass;
        }
        row.audit_status = all_pass ? "pass" : "fail";
      }
      if (config.emit_traces && outcome.eating && write_files) {
        std::ostringstream name;
        name << "trial_" << trial << ".csv";
        emit_trace(*outcome.eating,
                   (std::filesystem::path(config.out_dir) / "traces" / name.str()).string());
      }
    } catch (const std::exception& e) {
      row.error = e.what();
      ++report.errored_trials;
    }
    if (row.error.empty()) {
      report.min_ratio = std::min(report.min_ratio, row.ratio);
      ratio_sum += row.ratio;
      report.worst_slack = std::max(report.worst_slack, row.feasibility_slack);
      if (row.ratio < config.theoretical_bound() - config.tolerances.welfare_ratio ||
          row.feasibility_slack > config.tolerances.feasibility ||
          row.audit_status == "fail") {
        report.bounds_ok = false;
      }
    } else {
      report.bounds_ok = false;
    }
    report.rows.push_back(std::move(row));
  }
  const int clean = config.trials - report.errored_trials;
  report.mean_ratio = clean > 0 ? ratio_sum / clean : 0;
  if (clean == 0) report.min_ratio = 0;

  if (write_files) {
    std::ofstream csv(std::filesystem::path(config.out_dir) / "report.csv");
    csv << report_csv(report);
    std::ofstream summary(std::filesystem::path(config.out_dir) / "summary.json");
    summary << report_summary_json(report, config).dump(2) << '\n';
  }
  return report;
}

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "trial,instance_hash,opt,expected_welfare,ratio,feasibility_slack,certificate_bound,"
         "audit_status,error\n";
  for (const auto& row : report.rows) {
    out << row.trial << ',' << row.instance_hash << ',' << format_double(row.opt) << ','
        << format_double(row.expected_welfare) << ',' << format_double(row.ratio) << ','
        << format_double(row.feasibility_slack) << ','
        << (row.certificate_bound ? format_double(*row.certificate_bound) : "") << ','
        << row.audit_status << ',' << row.error << '\n';
  }
  return out.str();
}

void emit_trace(const EatingOutcome& outcome, std::ostream& out) {
  out << "process_owner,bidder,start_time,share,stopping_time\n";
  for (std::size_t i = 0; i < outcome.processes.size(); ++i) {
    const auto& process = outcome.processes[i];
    const auto& w = outcome.weights[i];
    const std::string stop =
        process.stopping_time ? format_double(*process.stopping_time) : "undefined";
    for (std::size_t j = 0; j < w.size(); ++j) {
      // + 0.0 normalizes the -0 that -log(1) produces
      out << i << ',' << j << ','
          << (w[j] > 0 ? format_double(-std::log(w[j]) + 0.0) : "never") << ','
          << format_double(process.shares[j]) << ',' << stop << '\n';
    }
  }
}

void emit_trace(const EatingOutcome& outcome, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace file: " + path);
  emit_trace(outcome, out);
  if (!out.good()) throw std::runtime_error("trace write failed: " + path);
}

}  // namespace iva
