#include "iva/json_io.hpp"

#include <fstream>

namespace iva {

using nlohmann::json;

namespace {
RationalEntry parse_rational(const json& value) {
  if (value.is_number_integer()) return {value.get<long long>(), 1};
  if (value.is_string()) {
    const std::string text = value.get<std::string>();
    const auto slash = text.find('/');
    if (slash == std::string::npos) return {std::stoll(text), 1};
    return {std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1))};
  }
  throw std::invalid_argument("linear matroid entries must be integers or \"p/q\" strings");
}
}  // namespace

std::shared_ptr<Matroid> parse_matroid_spec(const json& spec) {
  require(spec.contains("kind"), "matroid spec needs a kind");
  const std::string kind = spec.at("kind").get<std::string>();
  const json params = spec.value("params", json::object());
  if (kind == "uniform") {
    return std::make_shared<UniformMatroid>(params.at("n").get<int>(), params.at("k").get<int>());
  }
  if (kind == "partition") {
    return std::make_shared<PartitionMatroid>(
        params.at("blocks").get<std::vector<std::vector<int>>>(),
        params.at("capacities").get<std::vector<int>>());
  }
  if (kind == "graphic") {
    std::vector<std::pair<int, int>> edges;
    for (const auto& edge : params.at("edges")) {
      edges.emplace_back(edge.at(0).get<int>(), edge.at(1).get<int>());
    }
    return std::make_shared<GraphicMatroid>(params.at("vertices").get<int>(), std::move(edges));
  }
  if (kind == "linear") {
    std::vector<std::vector<RationalEntry>> rows;
    for (const auto& row : params.at("matrix")) {
      std::vector<RationalEntry> entries;
      for (const auto& value : row) entries.push_back(parse_rational(value));
      rows.push_back(std::move(entries));
    }
    const int n = rows.empty() ? params.at("n").get<int>() : static_cast<int>(rows.front().size());
    return std::make_shared<LinearMatroid>(n, std::move(rows));
  }
  if (kind == "explicit") {
    return std::make_shared<ExplicitMatroid>(
        params.at("n").get<int>(),
        params.at("independent").get<std::vector<std::vector<int>>>());
  }
  throw std::invalid_argument("unknown matroid kind: " + kind);
}

std::pair<ValuationFamilySpec, int> parse_valuation_spec(const json& spec) {
  require(spec.contains("family"), "valuation spec needs a family");
  const std::string family = spec.at("family").get<std::string>();
  const json params = spec.value("params", json::object());
  const int n = spec.at("n").get<int>();

  if (family == "affine-resale") {
    return {ValuationFamilySpec::affine_resale(
                params.at("own").get<std::vector<double>>(),
                params.at("cross").get<std::vector<std::vector<double>>>()),
            n};
  }
  if (family == "mineral-average") return {ValuationFamilySpec::mineral_average(), n};
  if (family == "max-signal") return {ValuationFamilySpec::max_signal(), n};
  if (family == "weighted-matroid-rank") {
    return {ValuationFamilySpec::weighted_matroid_rank(
                parse_matroid_spec(params.at("matroid")),
                params.at("weights").get<std::vector<double>>()),
            n};
  }
  if (family == "neighborhood-graph") {
    const std::string aggregate = params.value("aggregate", "sum");
    return {ValuationFamilySpec::neighborhood_graph(
                params.at("neighbors").get<std::vector<std::vector<int>>>(),
                aggregate == "max" ? ValuationFamilySpec::Aggregate::kMax
                                   : ValuationFamilySpec::Aggregate::kSum),
            n};
  }
  if (family == "custom-table") {
    std::map<int, std::vector<double>> values;
    for (const auto& [key, column] : params.at("values").items()) {
      values[std::stoi(key)] = column.get<std::vector<double>>();
    }
    std::optional<ValuationMetadata> metadata;
    if (params.contains("metadata")) {
      ValuationMetadata meta;
      const json& m = params.at("metadata");
      meta.claimed_sos = m.value("claimed_sos", false);
      if (m.contains("claimed_d")) meta.claimed_d = m.at("claimed_d").get<int>();
      meta.monotone = m.value("monotone", false);
      metadata = meta;
    }
    return {ValuationFamilySpec::custom_table(
                params.at("grid").get<std::vector<std::vector<double>>>(), std::move(values),
                metadata),
            n};
  }
  throw std::invalid_argument("unknown valuation family: " + family);
}

ExperimentConfig parse_config(const json& config) {
  ExperimentConfig result;
  const int version = config.value("version", kConfigSchemaVersion);
  require(version == kConfigSchemaVersion, "unsupported config schema version");

  const std::string mechanism = config.at("mechanism").get<std::string>();
  if (mechanism == "eating") {
    result.mechanism = MechanismKind::kEating;
  } else if (mechanism == "cp") {
    result.mechanism = MechanismKind::kCp;
  } else if (mechanism == "cp-hetero") {
    result.mechanism = MechanismKind::kCpHetero;
  } else {
    throw std::invalid_argument("unknown mechanism: " + mechanism);
  }

  auto [valuation, n] = parse_valuation_spec(config.at("valuation"));
  result.valuation = std::move(valuation);
  result.n = n;
  if (config.contains("matroid")) result.matroid = parse_matroid_spec(config.at("matroid"));

  if (config.contains("signals")) {
    const json& signals = config.at("signals");
    const std::string dist = signals.value("dist", "uniform");
    if (dist == "uniform") {
      result.signals.kind = SignalDistribution::Kind::kUniform;
      result.signals.lo = signals.value("lo", 0.0);
      result.signals.hi = signals.value("hi", 1.0);
    } else if (dist == "exponential") {
      result.signals.kind = SignalDistribution::Kind::kExponential;
      result.signals.rate = signals.value("rate", 1.0);
    } else if (dist == "grid") {
      result.signals.kind = SignalDistribution::Kind::kGrid;
      result.signals.values = signals.at("values").get<std::vector<double>>();
    } else {
      throw std::invalid_argument("unknown signal distribution: " + dist);
    }
  }

  result.trials = config.value("trials", 1);
  if (config.contains("seed")) {
    result.seed = config.at("seed").get<std::uint64_t>();
    result.seed_set = true;
  }
  result.d = config.value("d", 1);
  if (config.contains("d_reports")) {
    result.d_reports = config.at("d_reports").get<std::vector<int>>();
  }
  result.out_dir = config.value("out_dir", std::string{});
  result.emit_traces = config.value("emit_traces", false);
  result.audit = config.value("audit", false);
  result.certificates = config.value("certificates", false);
  if (config.contains("tolerances")) {
    const json& tol = config.at("tolerances");
    result.tolerances.feasibility = tol.value("feasibility", result.tolerances.feasibility);
    result.tolerances.welfare_ratio = tol.value("welfare_ratio", result.tolerances.welfare_ratio);
    result.tolerances.audit_gain = tol.value("audit_gain", result.tolerances.audit_gain);
  }
  result.validate();
  return result;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  json config;
  in >> config;
  return parse_config(config);
}

json certificate_to_json(const DualCertificate& certificate) {
  return json{{"bidders", certificate.bidders},
              {"alpha", certificate.alpha},
              {"beta", certificate.beta},
              {"gamma", certificate.gamma},
              {"bound", certificate.bound},
              {"sum_y", certificate.sum_shares},
              {"dual_feasible", certificate.dual_feasible}};
}

json cp_outcome_to_json(const CPOutcome& outcome) {
  json result{{"candidates", outcome.candidates},
              {"partition", outcome.partition},
              {"slots", outcome.slots},
              {"probabilities", outcome.probabilities},
              {"payments", outcome.payments},
              {"served", outcome.served},
              {"seed", outcome.seed}};
  if (outcome.kind == CPOutcome::Kind::kHetero) {
    result["imax"] = outcome.imax;
    result["imax_candidate"] = outcome.imax_candidate;
    result["dbar"] = outcome.dbar;
    result["dbar_imax"] = outcome.dbar_imax;
  }
  return result;
}

json report_summary_json(const ExperimentReport& report, const ExperimentConfig& config) {
  const char* mechanism = config.mechanism == MechanismKind::kEating  ? "eating"
                          : config.mechanism == MechanismKind::kCp    ? "cp"
                                                                      : "cp-hetero";
  return json{{"schema_version", kReportSchemaVersion},
              {"mechanism", mechanism},
              {"family", config.valuation.family_name()},
              {"n", config.n},
              {"seed", config.seed},
              {"trials", config.trials},
              {"min_ratio", report.min_ratio},
              {"mean_ratio", report.mean_ratio},
              {"worst_slack", report.worst_slack},
              {"errored_trials", report.errored_trials},
              {"theoretical_bound", config.theoretical_bound()},
              {"bounds_ok", report.bounds_ok}};
}

}  // namespace iva
