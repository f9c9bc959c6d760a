#include "anarchy/paths.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "anarchy/errors.hpp"

namespace anarchy {

namespace {

struct Edge {
  std::size_t link_index;
  std::string other_as;
};

void dfs(const Network& net, const std::map<std::string, std::vector<Edge>>& adj,
         const std::string& current, const std::string& target,
         std::set<std::string>& visited, std::vector<std::size_t>& stack,
         std::vector<std::vector<std::size_t>>& out) {
  if (current == target) {
    out.push_back(stack);
    return;
  }
  auto it = adj.find(current);
  if (it == adj.end()) return;
  for (const Edge& e : it->second) {
    if (visited.count(e.other_as)) continue;
    visited.insert(e.other_as);
    stack.push_back(e.link_index);
    dfs(net, adj, e.other_as, target, visited, stack, out);
    stack.pop_back();
    visited.erase(e.other_as);
  }
}

}  // namespace

std::vector<Path> enumerate_paths(const Network& net, const std::string& origin_host,
                                  const std::string& destination_host,
                                  std::optional<std::size_t> k) {
  const EndHost* o = net.find_endhost(origin_host);
  const EndHost* t = net.find_endhost(destination_host);
  if (!o) throw UnknownEndHostError("unknown end-host: " + origin_host);
  if (!t) throw UnknownEndHostError("unknown end-host: " + destination_host);
  if (k && *k < 1) throw InvalidArgumentError("path limit k must be >= 1");

  std::vector<Path> result;
  if (o->home_as == t->home_as) {
    // Hosts attach to the same AS; the unique walk is empty and cost-free.
    result.push_back({origin_host, destination_host, {}});
    return result;
  }

  std::map<std::string, std::vector<Edge>> adj;
  for (std::size_t i = 0; i < net.links.size(); ++i) {
    const Link& l = net.links[i];
    adj[l.endpoint_a].push_back({i, l.endpoint_b});
    adj[l.endpoint_b].push_back({i, l.endpoint_a});
  }

  std::set<std::string> visited{o->home_as};
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> raw;
  dfs(net, adj, o->home_as, t->home_as, visited, stack, raw);
  if (raw.empty())
    throw NoPathError("no path between " + origin_host + " and " + destination_host);

  struct Ranked {
    double free_flow_cost;
    std::size_t hops;
    std::vector<std::string> link_ids;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(raw.size());
  for (const auto& seq : raw) {
    Ranked r;
    r.hops = seq.size();
    r.free_flow_cost = 0.0;
    for (std::size_t li : seq) {
      const auto& coeffs = net.links[li].cost.coefficients();
      r.free_flow_cost += coeffs.empty() ? 0.0 : coeffs[0];
      r.link_ids.push_back(net.links[li].id);
    }
    ranked.push_back(std::move(r));
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.free_flow_cost != b.free_flow_cost) return a.free_flow_cost < b.free_flow_cost;
    if (a.hops != b.hops) return a.hops < b.hops;
    return a.link_ids < b.link_ids;
  });

  std::size_t limit = k ? std::min(*k, ranked.size()) : ranked.size();
  for (std::size_t i = 0; i < limit; ++i)
    result.push_back({origin_host, destination_host, std::move(ranked[i].link_ids)});
  return result;
}

PathUniverse PathUniverse::build(const Network& net, std::optional<std::size_t> k) {
  PathUniverse u;
  u.net_ = &net;
  for (const auto& l : net.links) {
    u.link_ids_.push_back(l.id);
    u.link_costs_.push_back(l.cost);
  }
  std::map<std::string, std::size_t> link_lookup;
  for (std::size_t i = 0; i < u.link_ids_.size(); ++i) link_lookup[u.link_ids_[i]] = i;

  for (std::size_t di = 0; di < net.demands.size(); ++di) {
    const Demand& d = net.demands[di];
    if (d.volume <= 0.0) continue;  // zero-demand pairs are dropped
    auto paths = enumerate_paths(net, d.origin, d.destination, k);
    OdBlock block;
    block.demand_index = di;
    block.origin = d.origin;
    block.destination = d.destination;
    block.volume = d.volume;
    block.first_path = u.paths_.size();
    block.path_count = paths.size();
    for (auto& p : paths) {
      std::vector<std::size_t> li;
      for (const auto& id : p.links) li.push_back(link_lookup.at(id));
      u.path_link_ids_.push_back(std::move(li));
      u.path_block_.push_back(u.blocks_.size());
      u.paths_.push_back(std::move(p));
    }
    u.blocks_.push_back(std::move(block));
  }
  return u;
}

std::size_t PathUniverse::link_index(const std::string& link_id) const {
  for (std::size_t i = 0; i < link_ids_.size(); ++i)
    if (link_ids_[i] == link_id) return i;
  throw InvalidArgumentError("unknown link id: " + link_id);
}

std::vector<std::size_t> PathUniverse::blocks_of_host(const std::string& endhost_id) const {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    if (blocks_[b].origin == endhost_id) out.push_back(b);
  return out;
}

}  // namespace anarchy
