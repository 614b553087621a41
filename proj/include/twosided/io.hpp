#pragma once

#include <string>
#include <vector>

#include "twosided/audit.hpp"
#include "twosided/distribution.hpp"
#include "twosided/mechanisms.hpp"

namespace twosided {

/// Parses scenario JSON. Schema errors (kSchema) name the offending field path, and syntax errors
/// give line and column; `origin` prefixes every message.
Scenario parse_scenario(const std::string& text, const std::string& origin = "scenario");
/// Reads and parses a scenario file; unreadable files raise kIo.
Scenario load_scenario(const std::string& path);
/// Canonical JSON for a scenario; parse_scenario(scenario_json(sc)) reproduces sc.
std::string scenario_json(const Scenario& sc);

Distribution parse_distribution(const std::string& text);
std::string distribution_json(const Distribution& d);

/// Parses {"b": [...], "s": [...]} with rationals as strings or integers.
ValuationProfile parse_profile(const std::string& text);
std::string profile_json(const ValuationProfile& p);

std::string outcome_json(const TradeOutcome& o);
std::string audit_json(const std::vector<AuditReport>& reports);

}  // namespace twosided
