#include "anarchy/topologies.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "anarchy/errors.hpp"
#include "anarchy/paths.hpp"
#include "anarchy/serialize.hpp"
#include "anarchy/solvers.hpp"

namespace anarchy {

namespace {

int integral_exponent(double p, const char* what) {
  double r = std::round(p);
  if (p < 1.0 || std::abs(p - r) > 1e-12)
    throw InvalidArgumentError(std::string(what) + ": generator requires an integer p >= 1");
  return static_cast<int>(r);
}

}  // namespace

Network gen_parallel_links(const ParallelLinksSpec& spec) {
  if (spec.m < 1 || spec.d < 0.0 || spec.K < 1)
    throw InvalidArgumentError("invalid parallel-links spec");
  int p = integral_exponent(spec.p, "parallel links");
  Network net;
  net.ases.push_back({"O"});
  net.ases.push_back({"D"});
  double dp = std::pow(spec.d, p);
  for (int i = 1; i <= spec.m; ++i)
    net.links.push_back({"alpha" + std::to_string(i), "O", "D", CostPolynomial::constant(dp)});
  net.links.push_back({"beta", "O", "D", CostPolynomial::monomial(p)});
  for (int k = 1; k <= spec.K; ++k)
    net.endhosts.push_back({"e" + std::to_string(k), "O"});
  net.endhosts.push_back({"dst", "D"});
  for (int k = 1; k <= spec.K; ++k)
    net.demands.push_back({"e" + std::to_string(k), "dst", spec.d / spec.K});
  return net;
}

Network gen_ladder(const LadderSpec& spec) {
  if (spec.H < 2 || spec.d < 0.0 || spec.t < 0.0)
    throw InvalidArgumentError("invalid ladder spec");
  int p = integral_exponent(spec.p, "ladder");
  Network net;
  for (int i = 1; i <= spec.H; ++i) {
    for (int side = 1; side <= 2; ++side) {
      std::string as = "A" + std::to_string(i) + std::to_string(side);
      net.ases.push_back({as});
      net.endhosts.push_back({"e" + std::to_string(i) + std::to_string(side), as});
    }
  }
  for (int i = 1; i <= spec.H; ++i)
    net.links.push_back({"h" + std::to_string(i), "A" + std::to_string(i) + "1",
                         "A" + std::to_string(i) + "2", CostPolynomial::monomial(p)});
  for (int g = 1; g <= spec.H - 1; ++g)
    for (int side = 1; side <= 2; ++side)
      net.links.push_back({"v" + std::to_string(g) + std::to_string(side),
                           "A" + std::to_string(g) + std::to_string(side),
                           "A" + std::to_string(g + 1) + std::to_string(side),
                           CostPolynomial({0.0, spec.t})});
  for (int i = 1; i <= spec.H; ++i)
    net.demands.push_back({"e" + std::to_string(i) + "1", "e" + std::to_string(i) + "2", spec.d});
  return net;
}

double great_circle_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kEarthRadiusKm = 6371.0;
  constexpr double deg = std::numbers::pi / 180.0;
  double phi1 = lat1 * deg, phi2 = lat2 * deg;
  double dphi = (lat2 - lat1) * deg, dlambda = (lon2 - lon1) * deg;
  double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
             std::cos(phi1) * std::cos(phi2) * std::sin(dlambda / 2) * std::sin(dlambda / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

namespace {

struct TrafficMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
};

TrafficMatrix parse_traffic_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open traffic matrix");
  TrafficMatrix tm;
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw ParseError(path, 1, "empty traffic matrix");
  ++lineno;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      // trim
      cell.erase(0, cell.find_first_not_of(" \t\r"));
      cell.erase(cell.find_last_not_of(" \t\r") + 1);
      if (!cell.empty()) tm.names.push_back(cell);
    }
  }
  if (tm.names.empty()) throw ParseError(path, 1, "header row has no PoP names");
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError(path, lineno, "not a number: '" + cell + "'");
      }
    }
    if (row.size() != tm.names.size())
      throw ParseError(path, lineno, "row has " + std::to_string(row.size()) +
                                         " entries, expected " + std::to_string(tm.names.size()));
    tm.values.push_back(std::move(row));
  }
  if (tm.values.size() != tm.names.size())
    throw ParseError(path, lineno, "matrix has " + std::to_string(tm.values.size()) +
                                       " rows, expected " + std::to_string(tm.names.size()));
  return tm;
}

Network build_abilene(const Network& topo, const TrafficMatrix& tm, double delta_scale,
                      double demand_scale, int hosts_per_pop) {
  Network net;
  net.ases = topo.ases;
  for (const Link& l : topo.links) {
    const AsInfo* a = topo.find_as(l.endpoint_a);
    const AsInfo* b = topo.find_as(l.endpoint_b);
    double dist = great_circle_km(a->lat, a->lon, b->lat, b->lon);
    net.links.push_back({l.id, l.endpoint_a, l.endpoint_b,
                         CostPolynomial({delta_scale * dist, 0.0, 1.0})});
  }
  for (const auto& as : net.ases)
    for (int j = 1; j <= hosts_per_pop; ++j)
      net.endhosts.push_back({as.id + "_h" + std::to_string(j), as.id});
  std::size_t n = tm.names.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || tm.values[i][j] <= 0.0) continue;
      for (int h = 1; h <= hosts_per_pop; ++h)
        net.demands.push_back({tm.names[i] + "_h" + std::to_string(h),
                               tm.names[j] + "_h" + std::to_string(h),
                               tm.values[i][j] * demand_scale / hosts_per_pop});
    }
  }
  return net;
}

}  // namespace

Network load_abilene(const AbileneConfig& cfg, AbileneLoadInfo* info) {
  Network topo = load_network(cfg.topology_path);
  for (const auto& as : topo.ases)
    if (!as.has_coordinates)
      throw MissingCoordinatesError("AS " + as.id + " lacks lat/lon coordinates");

  TrafficMatrix tm = parse_traffic_matrix(cfg.traffic_matrix_path);
  for (const auto& name : tm.names)
    if (!topo.find_as(name))
      throw ParseError(cfg.traffic_matrix_path, 1, "unknown PoP name: " + name);

  // Symmetrize by averaging; report when the input was asymmetric.
  bool symmetrized = false;
  std::size_t n = tm.names.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (tm.values[i][j] != tm.values[j][i]) symmetrized = true;
      double avg = 0.5 * (tm.values[i][j] + tm.values[j][i]);
      tm.values[i][j] = tm.values[j][i] = avg;
    }
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) total += tm.values[i][j];

  double demand_scale = cfg.demand_scale;
  if (demand_scale <= 0.0) demand_scale = total > 0.0 ? 10.0 / total : 1.0;

  double delta_scale = cfg.delta_scale;
  if (delta_scale <= 0.0) {
    // Calibrate the mean propagation term to a tenth of the mean queueing
    // term f^2 at the end-host optimum (short fixed-point iteration):
    // congestion stays the dominant cost, the offsets only break ties
    // between same-length paths.
    double mean_dist = 0.0;
    for (const Link& l : topo.links) {
      const AsInfo* a = topo.find_as(l.endpoint_a);
      const AsInfo* b = topo.find_as(l.endpoint_b);
      mean_dist += great_circle_km(a->lat, a->lon, b->lat, b->lon);
    }
    mean_dist /= topo.links.empty() ? 1.0 : static_cast<double>(topo.links.size());
    delta_scale = 1e-3;
    if (total > 0.0 && mean_dist > 0.0) {
      SolverConfig scfg;
      scfg.grad_tolerance = 1e-6;
      for (int round = 0; round < 3; ++round) {
        Network candidate =
            build_abilene(topo, tm, delta_scale, demand_scale, cfg.hosts_per_pop);
        auto universe = PathUniverse::build(candidate);
        auto opt = solve_social_optimum(universe, SocialObjective::EndHost, scfg);
        auto lf = link_flows(opt.pattern);
        double mean_queue = 0.0;
        for (double f : lf.flows) mean_queue += f * f;
        mean_queue /= lf.flows.empty() ? 1.0 : static_cast<double>(lf.flows.size());
        if (mean_queue <= 0.0) break;
        delta_scale = 0.1 * mean_queue / mean_dist;
      }
    }
  }

  if (info) {
    info->effective_delta_scale = delta_scale;
    info->effective_demand_scale = demand_scale;
    info->total_demand = total * demand_scale;
    info->matrix_symmetrized = symmetrized;
  }
  return build_abilene(topo, tm, delta_scale, demand_scale, cfg.hosts_per_pop);
}

}  // namespace anarchy
