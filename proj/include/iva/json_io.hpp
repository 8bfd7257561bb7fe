#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "iva/certificate.hpp"
#include "iva/cp.hpp"
#include "iva/harness.hpp"
#include "iva/valuation.hpp"

namespace iva {

/// {"kind": "uniform|partition|graphic|linear|explicit", "params": {...}}
std::shared_ptr<Matroid> parse_matroid_spec(const nlohmann::json& spec);

/// {"family": "...", "params": {...}, "n": int}; returns the spec and the
/// declared bidder count.
std::pair<ValuationFamilySpec, int> parse_valuation_spec(const nlohmann::json& spec);

ExperimentConfig parse_config(const nlohmann::json& config);
ExperimentConfig load_config(const std::string& path);

nlohmann::json certificate_to_json(const DualCertificate& certificate);
nlohmann::json cp_outcome_to_json(const CPOutcome& outcome);
nlohmann::json report_summary_json(const ExperimentReport& report, const ExperimentConfig& config);

}  // namespace iva
