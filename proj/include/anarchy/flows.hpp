#pragma once

#include <map>
#include <string>
#include <vector>

#include "anarchy/paths.hpp"

namespace anarchy {

/// Objective selector for cost and gradient evaluation.
struct Objective {
  enum class Kind { EndHost, Operator, Selfish, Beckmann } kind = Kind::EndHost;
  std::string endhost;  // only for Selfish

  static Objective endhost_total() { return {Kind::EndHost, {}}; }
  static Objective operator_total() { return {Kind::Operator, {}}; }
  static Objective selfish(std::string e) { return {Kind::Selfish, std::move(e)}; }
  static Objective beckmann() { return {Kind::Beckmann, {}}; }
};

/// Global path-flow pattern over a fixed PathUniverse. Entries are
/// non-negative and per-block sums equal the demand volume.
class PathFlowPattern {
 public:
  /// Validates and re-normalizes entries (per-block absolute tolerance 1e-9);
  /// throws InvalidArgumentError outside tolerance or on negative entries.
  static PathFlowPattern create(const PathUniverse& universe,
                                std::vector<double> entries);

  /// Demand split equally over each block's paths.
  static PathFlowPattern equal_split(const PathUniverse& universe);

  /// All demand on each block's first (best-ranked) path.
  static PathFlowPattern first_path(const PathUniverse& universe);

  const PathUniverse& universe() const { return *universe_; }
  const std::vector<double>& entries() const { return entries_; }
  double operator[](std::size_t path_id) const { return entries_[path_id]; }

  /// Maximum absolute entry difference; patterns must share a universe.
  double max_entry_distance(const PathFlowPattern& other) const;

 private:
  PathFlowPattern(const PathUniverse& u, std::vector<double> e)
      : universe_(&u), entries_(std::move(e)) {}
  const PathUniverse* universe_ = nullptr;
  std::vector<double> entries_;

  friend class MutablePattern;
};

struct LinkFlowVector {
  std::vector<double> flows;  // indexed like PathUniverse links
  std::map<std::string, double> by_id;
};

LinkFlowVector link_flows(const PathFlowPattern& pattern);

/// C*(F) = sum_l f_l * c_l(f_l)
double endhost_cost(const PathFlowPattern& pattern);

/// C#(F) = sum_l c_l(f_l), all links including unused ones.
double operator_cost(const PathFlowPattern& pattern);

/// C*_(e)(F) = sum_l f_{l,(e)} * c_l(f_l) with origin-only attribution.
/// Throws UnknownEndHostError.
double selfish_cost(const PathFlowPattern& pattern, const std::string& endhost_id);

/// Beckmann potential sum_l int_0^{f_l} c_l(x) dx.
double beckmann_potential(const PathFlowPattern& pattern);

/// C_pi(F) = sum of link costs along the path at current link flows.
double path_cost(const PathFlowPattern& pattern, std::size_t path_id);

double objective_value(const PathFlowPattern& pattern, const Objective& obj);

/// Analytic partial derivatives of the objective w.r.t. every path flow.
/// For Selfish(e), entries of paths not owned by e are reported as 0.
std::vector<double> gradient(const PathFlowPattern& pattern, const Objective& obj);

}  // namespace anarchy
