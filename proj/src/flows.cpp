#include "anarchy/flows.hpp"

#include <cmath>
#include <cstdlib>

#include "anarchy/errors.hpp"

namespace anarchy {

namespace {
constexpr double kFeasibilityTol = 1e-9;

std::vector<double> raw_link_flows(const PathUniverse& u, const std::vector<double>& entries) {
  std::vector<double> f(u.link_count(), 0.0);
  for (std::size_t p = 0; p < entries.size(); ++p) {
    if (entries[p] == 0.0) continue;
    for (std::size_t li : u.path_links(p)) f[li] += entries[p];
  }
  return f;
}

// Host's own per-link flow under origin attribution.
std::vector<double> host_link_flows(const PathUniverse& u, const std::vector<double>& entries,
                                    const std::string& endhost_id) {
  std::vector<double> f(u.link_count(), 0.0);
  for (std::size_t b : u.blocks_of_host(endhost_id)) {
    const OdBlock& block = u.blocks()[b];
    for (std::size_t p = block.first_path; p < block.first_path + block.path_count; ++p)
      for (std::size_t li : u.path_links(p)) f[li] += entries[p];
  }
  return f;
}
}  // namespace

PathFlowPattern PathFlowPattern::create(const PathUniverse& universe,
                                        std::vector<double> entries) {
  if (entries.size() != universe.paths().size())
    throw InvalidArgumentError("entry count does not match path universe");
  for (double e : entries)
    if (e < 0.0 || !std::isfinite(e))
      throw InvalidArgumentError("path flows must be non-negative and finite");
  for (const OdBlock& b : universe.blocks()) {
    double sum = 0.0;
    for (std::size_t p = b.first_path; p < b.first_path + b.path_count; ++p)
      sum += entries[p];
    if (std::abs(sum - b.volume) > kFeasibilityTol)
      throw InvalidArgumentError("infeasible flow for OD pair " + b.origin + "->" +
                                 b.destination + ": sum " + std::to_string(sum) +
                                 " vs demand " + std::to_string(b.volume));
    if (sum > 0.0 && sum != b.volume) {
      double scale = b.volume / sum;
      for (std::size_t p = b.first_path; p < b.first_path + b.path_count; ++p)
        entries[p] *= scale;
    }
  }
  return PathFlowPattern(universe, std::move(entries));
}

PathFlowPattern PathFlowPattern::equal_split(const PathUniverse& universe) {
  std::vector<double> e(universe.paths().size(), 0.0);
  for (const OdBlock& b : universe.blocks()) {
    double share = b.volume / static_cast<double>(b.path_count);
    for (std::size_t p = b.first_path; p < b.first_path + b.path_count; ++p) e[p] = share;
  }
  return PathFlowPattern(universe, std::move(e));
}

PathFlowPattern PathFlowPattern::first_path(const PathUniverse& universe) {
  std::vector<double> e(universe.paths().size(), 0.0);
  for (const OdBlock& b : universe.blocks()) e[b.first_path] = b.volume;
  return PathFlowPattern(universe, std::move(e));
}

double PathFlowPattern::max_entry_distance(const PathFlowPattern& other) const {
  double m = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    m = std::max(m, std::abs(entries_[i] - other.entries_[i]));
  return m;
}

LinkFlowVector link_flows(const PathFlowPattern& pattern) {
  const PathUniverse& u = pattern.universe();
  LinkFlowVector v;
  v.flows = raw_link_flows(u, pattern.entries());
  for (std::size_t i = 0; i < v.flows.size(); ++i) v.by_id[u.link_id(i)] = v.flows[i];
  return v;
}

double endhost_cost(const PathFlowPattern& pattern) {
  const PathUniverse& u = pattern.universe();
  auto f = raw_link_flows(u, pattern.entries());
  double c = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) c += f[i] * u.link_cost(i).value(f[i]);
  return c;
}

double operator_cost(const PathFlowPattern& pattern) {
  const PathUniverse& u = pattern.universe();
  auto f = raw_link_flows(u, pattern.entries());
  double c = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) c += u.link_cost(i).value(f[i]);
  return c;
}

double selfish_cost(const PathFlowPattern& pattern, const std::string& endhost_id) {
  const PathUniverse& u = pattern.universe();
  if (!u.net().find_endhost(endhost_id))
    throw UnknownEndHostError("unknown end-host: " + endhost_id);
  auto f = raw_link_flows(u, pattern.entries());
  auto fe = host_link_flows(u, pattern.entries(), endhost_id);
  double c = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (fe[i] != 0.0) c += fe[i] * u.link_cost(i).value(f[i]);
  return c;
}

double beckmann_potential(const PathFlowPattern& pattern) {
  const PathUniverse& u = pattern.universe();
  auto f = raw_link_flows(u, pattern.entries());
  double c = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) c += u.link_cost(i).integral(f[i]);
  return c;
}

double path_cost(const PathFlowPattern& pattern, std::size_t path_id) {
  const PathUniverse& u = pattern.universe();
  auto f = raw_link_flows(u, pattern.entries());
  double c = 0.0;
  for (std::size_t li : u.path_links(path_id)) c += u.link_cost(li).value(f[li]);
  return c;
}

double objective_value(const PathFlowPattern& pattern, const Objective& obj) {
  switch (obj.kind) {
    case Objective::Kind::EndHost: return endhost_cost(pattern);
    case Objective::Kind::Operator: return operator_cost(pattern);
    case Objective::Kind::Selfish: return selfish_cost(pattern, obj.endhost);
    case Objective::Kind::Beckmann: return beckmann_potential(pattern);
  }
  return 0.0;
}

std::vector<double> gradient(const PathFlowPattern& pattern, const Objective& obj) {
  const PathUniverse& u = pattern.universe();
  const auto& entries = pattern.entries();
  auto f = raw_link_flows(u, entries);
  std::vector<double> grad(entries.size(), 0.0);

  std::vector<double> per_link(f.size(), 0.0);
  switch (obj.kind) {
    case Objective::Kind::EndHost:
      for (std::size_t i = 0; i < f.size(); ++i)
        per_link[i] = u.link_cost(i).value(f[i]) + f[i] * u.link_cost(i).derivative(f[i]);
      break;
    case Objective::Kind::Operator:
      for (std::size_t i = 0; i < f.size(); ++i)
        per_link[i] = u.link_cost(i).derivative(f[i]);
      break;
    case Objective::Kind::Beckmann:
      for (std::size_t i = 0; i < f.size(); ++i)
        per_link[i] = u.link_cost(i).value(f[i]);
      break;
    case Objective::Kind::Selfish: {
      if (!u.net().find_endhost(obj.endhost))
        throw UnknownEndHostError("unknown end-host: " + obj.endhost);
      auto fe = host_link_flows(u, entries, obj.endhost);
      for (std::size_t b : u.blocks_of_host(obj.endhost)) {
        const OdBlock& block = u.blocks()[b];
        for (std::size_t p = block.first_path; p < block.first_path + block.path_count; ++p) {
          double g = 0.0;
          for (std::size_t li : u.path_links(p))
            g += u.link_cost(li).value(f[li]) + fe[li] * u.link_cost(li).derivative(f[li]);
          grad[p] = g;
        }
      }
      return grad;
    }
  }

  for (std::size_t p = 0; p < entries.size(); ++p) {
    double g = 0.0;
    for (std::size_t li : u.path_links(p)) g += per_link[li];
    grad[p] = g;
  }
  return grad;
}

}  // namespace anarchy
