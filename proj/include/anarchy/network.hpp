#pragma once

#include <string>
#include <vector>

#include "anarchy/cost_polynomial.hpp"

namespace anarchy {

struct Link {
  std::string id;
  std::string endpoint_a;
  std::string endpoint_b;
  CostPolynomial cost;
};

struct EndHost {
  std::string id;
  std::string home_as;
};

struct Demand {
  std::string origin;       // end-host id
  std::string destination;  // end-host id
  double volume = 0.0;
};

struct AsInfo {
  std::string id;
  bool has_coordinates = false;
  double lat = 0.0;
  double lon = 0.0;
};

struct Network {
  std::vector<AsInfo> ases;
  std::vector<Link> links;
  std::vector<EndHost> endhosts;
  std::vector<Demand> demands;

  const Link* find_link(const std::string& id) const;
  const EndHost* find_endhost(const std::string& id) const;
  const AsInfo* find_as(const std::string& id) const;
};

struct ValidationFinding {
  std::string code;     // e.g. NegativeCoefficient, NoPath, DuplicateLinkId
  std::string subject;  // offending entity id
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationFinding> findings;
  bool clean() const { return findings.empty(); }
};

/// Reports every violated invariant; empty report iff the network is well
/// formed. Never throws.
ValidationReport validate(const Network& net);

}  // namespace anarchy
