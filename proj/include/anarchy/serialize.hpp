#pragma once

#include <string>

#include "json.hpp"

#include "anarchy/metrics.hpp"
#include "anarchy/network.hpp"
#include "anarchy/solvers.hpp"

namespace anarchy {

/// Topology document, format_version 1. See docs/formats.md.
nlohmann::json network_to_json(const Network& net);
Network network_from_json(const nlohmann::json& doc, const std::string& source = "<json>");

Network load_network(const std::string& path);
void save_network(const Network& net, const std::string& path);

nlohmann::json pattern_to_json(const PathFlowPattern& pattern);
PathFlowPattern pattern_from_json(const PathUniverse& universe, const nlohmann::json& doc);

nlohmann::json result_to_json(const EquilibriumResult& result);
nlohmann::json poa_report_to_json(const PoAReport& report);

std::string sweep_to_csv(const std::vector<SweepEntry>& entries);

/// FNV-1a 64-bit content digest, hex encoded; used in run manifests.
std::string file_digest(const std::string& path);

}  // namespace anarchy
