#include "anarchy/serialize.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "anarchy/errors.hpp"

namespace anarchy {

using nlohmann::json;

namespace {
constexpr int kFormatVersion = 1;
}

json network_to_json(const Network& net) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["ases"] = json::array();
  for (const auto& a : net.ases) {
    json as;
    as["id"] = a.id;
    if (a.has_coordinates) {
      as["lat"] = a.lat;
      as["lon"] = a.lon;
    }
    doc["ases"].push_back(as);
  }
  doc["links"] = json::array();
  for (const auto& l : net.links)
    doc["links"].push_back({{"id", l.id},
                            {"endpoints", {l.endpoint_a, l.endpoint_b}},
                            {"coefficients", l.cost.coefficients()}});
  doc["endhosts"] = json::array();
  for (const auto& e : net.endhosts)
    doc["endhosts"].push_back({{"id", e.id}, {"home_as", e.home_as}});
  doc["demands"] = json::array();
  for (const auto& d : net.demands)
    doc["demands"].push_back(
        {{"origin", d.origin}, {"destination", d.destination}, {"volume", d.volume}});
  return doc;
}

Network network_from_json(const json& doc, const std::string& source) {
  auto fail = [&](const std::string& reason) { throw ParseError(source, 0, reason); };
  if (!doc.is_object()) fail("topology document must be an object");
  if (!doc.contains("format_version") || doc["format_version"].get<int>() != kFormatVersion)
    fail("missing or unsupported format_version");
  Network net;
  for (const auto& a : doc.value("ases", json::array())) {
    AsInfo as;
    if (a.is_string()) {
      as.id = a.get<std::string>();
    } else {
      as.id = a.at("id").get<std::string>();
      if (a.contains("lat") && a.contains("lon")) {
        as.has_coordinates = true;
        as.lat = a["lat"].get<double>();
        as.lon = a["lon"].get<double>();
      }
    }
    net.ases.push_back(as);
  }
  for (const auto& l : doc.value("links", json::array())) {
    Link link;
    link.id = l.at("id").get<std::string>();
    const auto& eps = l.at("endpoints");
    if (!eps.is_array() || eps.size() != 2) fail("link " + link.id + ": endpoints must be a pair");
    link.endpoint_a = eps[0].get<std::string>();
    link.endpoint_b = eps[1].get<std::string>();
    link.cost = CostPolynomial(l.value("coefficients", std::vector<double>{}));
    net.links.push_back(std::move(link));
  }
  for (const auto& e : doc.value("endhosts", json::array()))
    net.endhosts.push_back({e.at("id").get<std::string>(), e.at("home_as").get<std::string>()});
  for (const auto& d : doc.value("demands", json::array()))
    net.demands.push_back({d.at("origin").get<std::string>(),
                           d.at("destination").get<std::string>(),
                           d.at("volume").get<double>()});
  return net;
}

Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ParseError(path, 0, e.what());
  }
  return network_from_json(doc, path);
}

void save_network(const Network& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path, 0, "cannot open file for writing");
  out << network_to_json(net).dump(2) << "\n";
}

json pattern_to_json(const PathFlowPattern& pattern) {
  const PathUniverse& u = pattern.universe();
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["flows"] = json::array();
  for (std::size_t p = 0; p < u.paths().size(); ++p) {
    const Path& path = u.paths()[p];
    doc["flows"].push_back({{"origin", path.origin},
                            {"destination", path.destination},
                            {"links", path.links},
                            {"flow", pattern[p]}});
  }
  return doc;
}

PathFlowPattern pattern_from_json(const PathUniverse& universe, const json& doc) {
  std::vector<double> entries(universe.paths().size(), 0.0);
  for (const auto& f : doc.at("flows")) {
    Path key{f.at("origin").get<std::string>(), f.at("destination").get<std::string>(),
             f.at("links").get<std::vector<std::string>>()};
    bool found = false;
    for (std::size_t p = 0; p < universe.paths().size(); ++p) {
      const Path& path = universe.paths()[p];
      if (path.origin == key.origin && path.destination == key.destination &&
          path.links == key.links) {
        entries[p] = f.at("flow").get<double>();
        found = true;
        break;
      }
    }
    if (!found)
      throw InvalidArgumentError("flow entry refers to a path outside the universe");
  }
  return PathFlowPattern::create(universe, std::move(entries));
}

json result_to_json(const EquilibriumResult& result) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["status"] = result.status == SolveStatus::Converged ? "converged" : "not_converged";
  doc["iterations"] = result.iterations;
  doc["residual"] = result.residual;
  doc["oscillation_detected"] = result.oscillation_detected;
  doc["pattern"] = pattern_to_json(result.pattern);
  auto lf = link_flows(result.pattern);
  doc["link_flows"] = lf.by_id;
  doc["condition_report"] = json::array();
  for (const auto& c : result.condition_report.checks)
    doc["condition_report"].push_back({{"scope", c.scope},
                                       {"level", c.level},
                                       {"used_spread", c.used_spread},
                                       {"unused_violation", c.unused_violation},
                                       {"clean", c.clean}});
  return doc;
}

json poa_report_to_json(const PoAReport& r) {
  return json{{"format_version", kFormatVersion},
              {"scenario", r.scenario},
              {"poa_star_0", r.poa_star_0},
              {"poa_star_plus", r.poa_star_plus},
              {"poa_hash_0", r.poa_hash_0},
              {"poa_hash_plus", r.poa_hash_plus},
              {"voi_star", r.voi_star},
              {"voi_hash", r.voi_hash},
              {"degenerate", r.degenerate},
              {"residual_opt", r.residual_opt},
              {"residual_li", r.residual_li},
              {"residual_pi", r.residual_pi},
              {"all_converged", r.all_converged}};
}

std::string sweep_to_csv(const std::vector<SweepEntry>& entries) {
  std::ostringstream out;
  out << "k,poa_star_0,poa_star_plus,poa_hash_0,poa_hash_plus,voi_star,voi_hash,"
         "residual_li,residual_pi,runtime_seconds,error\n";
  out.precision(12);
  for (const auto& e : entries) {
    if (e.solver_error) {
      out << e.k << ",,,,,,,,," << e.runtime_seconds << "," << e.error_message << "\n";
      continue;
    }
    const PoAReport& r = e.report;
    out << e.k << "," << r.poa_star_0 << "," << r.poa_star_plus << "," << r.poa_hash_0 << ","
        << r.poa_hash_plus << "," << r.voi_star << "," << r.voi_hash << "," << r.residual_li
        << "," << r.residual_pi << "," << e.runtime_seconds << ",\n";
  }
  return out.str();
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file for digest");
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

}  // namespace anarchy
