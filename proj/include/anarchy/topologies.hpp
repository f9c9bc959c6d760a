#pragma once

#include <string>
#include <vector>

#include "anarchy/closed_form.hpp"
#include "anarchy/network.hpp"

namespace anarchy {

/// Two ASes O and D, m constant-cost-d^p links, one link beta with cost f^p,
/// K end-hosts in O each sending d/K to one host in D. Requires integral p.
Network gen_parallel_links(const ParallelLinksSpec& spec);

/// 2H ASes, H horizontal links with cost f^p, 2(H-1) vertical links with cost
/// t*f, one end-host per AS, demand d across each rung. Requires integral p.
Network gen_ladder(const LadderSpec& spec);

struct AbileneConfig {
  std::string topology_path;
  std::string traffic_matrix_path;
  /// Propagation-delay units per km; 0 = auto-calibrate so that the mean
  /// delta matches the mean queueing cost at the end-host optimum.
  double delta_scale = 0.0;
  /// 0 = auto: normalize total demand to 10 flow units.
  double demand_scale = 0.0;
  int hosts_per_pop = 1;
};

struct AbileneLoadInfo {
  double effective_delta_scale = 0.0;
  double effective_demand_scale = 0.0;
  double total_demand = 0.0;
  bool matrix_symmetrized = false;  // asymmetric input averaged, reported
};

/// Loads the vendored Abilene snapshot: link costs f^2 + delta_l with
/// delta_l = delta_scale * great-circle distance, demands from the traffic
/// matrix. Throws ParseError on malformed input.
Network load_abilene(const AbileneConfig& cfg, AbileneLoadInfo* info = nullptr);

/// Great-circle distance in km between (lat, lon) points, haversine formula.
double great_circle_km(double lat1, double lon1, double lat2, double lon2);

}  // namespace anarchy
