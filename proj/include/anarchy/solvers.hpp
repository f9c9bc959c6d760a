#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anarchy/flows.hpp"

namespace anarchy {

struct SolverConfig {
  int max_iters = 100000;
  enum class StepRule { ExactLineSearch, Diminishing } step_rule = StepRule::ExactLineSearch;
  double grad_tolerance = 1e-8;
  double br_sweep_tolerance = 1e-10;
  unsigned seed = 0;
  bool randomize_best_response_order = false;
};

enum class SolveStatus { Converged, NotConverged };

/// Per-block record of the optimality / equilibrium box check.
struct ConditionCheck {
  std::string scope;            // OD pair or end-host id
  double level = 0.0;           // common marginal (or cost) level of used paths
  double used_spread = 0.0;     // max |marginal - level| over used paths
  double unused_violation = 0.0;  // max (level - marginal) over unused paths
  bool clean = false;
};

struct ConditionReport {
  std::vector<ConditionCheck> checks;
  bool clean() const {
    for (const auto& c : checks)
      if (!c.clean) return false;
    return true;
  }
};

struct EquilibriumResult {
  PathFlowPattern pattern;
  int iterations = 0;
  double residual = 0.0;
  SolveStatus status = SolveStatus::Converged;
  bool oscillation_detected = false;  // reported, not fatal
  ConditionReport condition_report;
};

enum class SocialObjective { EndHost, Operator };

/// Convex minimization of C* or C# over the product of per-OD simplices.
EquilibriumResult solve_social_optimum(const PathUniverse& universe,
                                       SocialObjective objective,
                                       const SolverConfig& cfg = {});

/// Wardrop (latency-only) equilibrium via Beckmann potential minimization.
EquilibriumResult solve_li_equilibrium(const PathUniverse& universe,
                                       const SolverConfig& cfg = {});

/// Perfect-information equilibrium via round-robin best-response dynamics.
EquilibriumResult solve_pi_equilibrium(const PathUniverse& universe,
                                       const SolverConfig& cfg = {},
                                       std::optional<PathFlowPattern> init = std::nullopt);

}  // namespace anarchy
