#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "iva/acceptance.hpp"
#include "iva/certificate.hpp"
#include "iva/harness.hpp"
#include "iva/json_io.hpp"

namespace {

int run_command(const std::string& config_path, int trials_override, std::int64_t seed_override,
                const std::string& out_override, bool emit_traces, bool audit, bool certificates) {
  iva::ExperimentConfig config = iva::load_config(config_path);
  if (trials_override > 0) config.trials = trials_override;
  if (seed_override >= 0) {
    config.seed = static_cast<std::uint64_t>(seed_override);
    config.seed_set = true;
  }
  if (!out_override.empty()) config.out_dir = out_override;
  config.emit_traces = config.emit_traces || emit_traces;
  config.audit = config.audit || audit;
  config.certificates = config.certificates || certificates;
  config.validate();

  const iva::ExperimentReport report = iva::run_campaign(config);
  std::cout << iva::report_summary_json(report, config).dump(2) << '\n';
  if (config.out_dir.empty()) {
    // no output directory: print the CSV so the run is still inspectable
    std::cout << iva::report_csv(report);
  } else {
    std::cout << "report written to " << config.out_dir << "/report.csv\n";
  }
  if (config.certificates && config.mechanism == iva::MechanismKind::kEating &&
      !config.out_dir.empty()) {
    // dump the certificate of the first trial for inspection
    const iva::Instance instance = iva::generate_instance(config, 0);
    const auto cert = iva::build_dual_certificate(instance.signals, instance.valuations);
    std::ofstream out(std::filesystem::path(config.out_dir) / "certificate_trial0.json");
    out << iva::certificate_to_json(cert).dump(2) << '\n';
  }
  return report.bounds_ok ? 0 : 1;
}

int check_command(const std::string& suite) {
  const auto results = iva::run_acceptance(suite);
  const bool ok = iva::print_acceptance(results, std::cout);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interdependent-value auction mechanisms: eating and candidate partitioning"};
  app.require_subcommand(1);

  std::string config_path;
  int trials = 0;
  std::int64_t seed = -1;
  std::string out_dir;
  bool emit_traces = false, audit = false, certificates = false;
  auto* run = app.add_subcommand("run", "run an experiment campaign from a JSON config");
  run->add_option("--config", config_path, "experiment config (JSON)")->required();
  run->add_option("--trials", trials, "override the config's trial count");
  run->add_option("--seed", seed, "override the config's seed");
  run->add_option("--out", out_dir, "output directory for report.csv / summary.json");
  run->add_flag("--emit-traces", emit_traces, "write per-trial eating traces (CSV)");
  run->add_flag("--audit", audit, "run truthfulness audits per trial");
  run->add_flag("--certificates", certificates, "compute dual certificates per trial");

  std::string suite = "all";
  auto* check = app.add_subcommand("check", "run the acceptance suites");
  check->add_option("--suite", suite, "eating | cp | matroid | all")
      ->check(CLI::IsMember({"eating", "cp", "matroid", "all"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_command(config_path, trials, seed, out_dir, emit_traces, audit, certificates);
    }
    return check_command(suite);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
