#include "anarchy/network.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "anarchy/errors.hpp"
#include "anarchy/paths.hpp"

namespace anarchy {

const Link* Network::find_link(const std::string& id) const {
  for (const auto& l : links)
    if (l.id == id) return &l;
  return nullptr;
}

const EndHost* Network::find_endhost(const std::string& id) const {
  for (const auto& e : endhosts)
    if (e.id == id) return &e;
  return nullptr;
}

const AsInfo* Network::find_as(const std::string& id) const {
  for (const auto& a : ases)
    if (a.id == id) return &a;
  return nullptr;
}

namespace {

// Connected components over the undirected AS graph.
std::map<std::string, int> components(const Network& net) {
  std::map<std::string, int> comp;
  for (const auto& a : net.ases) comp[a.id] = -1;
  std::multimap<std::string, std::string> adj;
  for (const auto& l : net.links) {
    adj.insert({l.endpoint_a, l.endpoint_b});
    adj.insert({l.endpoint_b, l.endpoint_a});
  }
  int next = 0;
  for (const auto& a : net.ases) {
    if (comp[a.id] != -1) continue;
    int c = next++;
    std::queue<std::string> q;
    q.push(a.id);
    comp[a.id] = c;
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      auto [lo, hi] = adj.equal_range(u);
      for (auto it = lo; it != hi; ++it) {
        auto found = comp.find(it->second);
        if (found != comp.end() && found->second == -1) {
          found->second = c;
          q.push(it->second);
        }
      }
    }
  }
  return comp;
}

}  // namespace

ValidationReport validate(const Network& net) {
  ValidationReport report;
  auto add = [&](std::string code, std::string subject, std::string detail) {
    report.findings.push_back({std::move(code), std::move(subject), std::move(detail)});
  };

  std::set<std::string> as_ids;
  for (const auto& a : net.ases) {
    if (!as_ids.insert(a.id).second) add("DuplicateAsId", a.id, "AS id repeated");
  }

  std::set<std::string> link_ids;
  for (const auto& l : net.links) {
    if (!link_ids.insert(l.id).second) add("DuplicateLinkId", l.id, "link id repeated");
    if (l.endpoint_a == l.endpoint_b)
      add("SelfLoop", l.id, "endpoints must be distinct");
    for (const auto& ep : {l.endpoint_a, l.endpoint_b})
      if (!as_ids.count(ep)) add("UnknownAs", l.id, "endpoint " + ep + " not an AS");
    const auto& coeffs = l.cost.coefficients();
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      if (coeffs[k] < 0.0)
        add("NegativeCoefficient", l.id, "coefficient " + std::to_string(k));
  }

  std::set<std::string> host_ids;
  for (const auto& e : net.endhosts) {
    if (!host_ids.insert(e.id).second) add("DuplicateEndHostId", e.id, "end-host id repeated");
    if (!as_ids.count(e.home_as)) add("UnknownHomeAs", e.id, "home AS " + e.home_as);
  }

  auto comp = components(net);
  int demand_comp = -1;
  bool demand_split = false;
  for (const auto& d : net.demands) {
    std::string subject = d.origin + "->" + d.destination;
    if (d.origin == d.destination) add("SelfDemand", subject, "origin equals destination");
    if (d.volume < 0.0) add("NegativeDemand", subject, "volume < 0");
    const EndHost* o = net.find_endhost(d.origin);
    const EndHost* t = net.find_endhost(d.destination);
    if (!o) add("UnknownEndHost", subject, "origin " + d.origin);
    if (!t) add("UnknownEndHost", subject, "destination " + d.destination);
    if (!o || !t) continue;
    auto co = comp.find(o->home_as);
    auto ct = comp.find(t->home_as);
    if (co == comp.end() || ct == comp.end()) continue;
    if (o->home_as != t->home_as && co->second != ct->second) {
      add("NoPath", subject, "demand endpoints in disconnected components");
      continue;
    }
    for (int c : {co->second, ct->second}) {
      if (demand_comp == -1) demand_comp = c;
      else if (demand_comp != c) demand_split = true;
    }
    if (o->home_as != t->home_as) {
      try {
        enumerate_paths(net, d.origin, d.destination, 1);
      } catch (const NoPathError&) {
        add("NoPath", subject, "no simple path between demand endpoints");
      }
    }
  }
  if (demand_split)
    add("DisconnectedDemandAses", "", "demand-hosting ASes span multiple components");
  return report;
}

}  // namespace anarchy
