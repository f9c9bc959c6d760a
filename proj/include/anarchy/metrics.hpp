#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anarchy/solvers.hpp"

namespace anarchy {

struct PoAReport {
  double poa_star_0 = 1.0;
  double poa_star_plus = 1.0;
  double poa_hash_0 = 1.0;
  double poa_hash_plus = 1.0;
  double voi_star = 0.0;
  double voi_hash = 0.0;
  bool degenerate = false;  // a 0/0 ratio was clamped to 1
  std::string scenario;
  double residual_opt = 0.0;
  double residual_li = 0.0;
  double residual_pi = 0.0;
  bool all_converged = true;
};

struct PoAComputation {
  PoAReport report;
  EquilibriumResult endhost_optimum;
  EquilibriumResult operator_optimum;
  EquilibriumResult li_equilibrium;
  EquilibriumResult pi_equilibrium;
};

/// Runs all four solvers and forms the four ratios and two VoIs.
PoAComputation compute_poa(const PathUniverse& universe, const SolverConfig& cfg = {},
                           const std::string& scenario = {});

/// VoI = (PoA_LI - PoA_PI) / PoA_LI; positive means information helps.
double compute_voi(double poa_li, double poa_pi);

struct SweepEntry {
  std::size_t k = 0;
  PoAReport report;
  bool solver_error = false;
  std::string error_message;
  double runtime_seconds = 0.0;
};

/// Re-enumerates paths with limit k for each entry and recomputes equilibria;
/// the optima (denominators) are computed once on the unrestricted path set.
std::vector<SweepEntry> run_multipath_sweep(const Network& net,
                                            const std::vector<std::size_t>& k_values,
                                            const SolverConfig& cfg = {});

}  // namespace anarchy
