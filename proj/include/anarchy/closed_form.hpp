#pragma once

#include <vector>

#include "anarchy/errors.hpp"

namespace anarchy {

/// Parallel-links scenario: m constant links alpha_i with cost d^p, one link
/// beta with cost f^p, K end-hosts sharing total demand d.
struct ParallelLinksSpec {
  int m = 1;
  double p = 1.0;  // >= 1
  double d = 1.0;
  int K = 1;
};

/// Ladder scenario L(H, p, d, t): H rungs with cost f^p, vertical rails with
/// cost t*f, demand d across each rung.
struct LadderSpec {
  int H = 2;
  double p = 1.0;
  double d = 1.0;
  double t = 1.0;

  double lambda() const;  // p * d^(p-1)
};

struct ParallelOptimum {
  double beta_flow_opt;     // f_beta at the end-host optimum
  double endhost_opt_cost;  // C*(F*)
  double operator_opt_cost; // C#(F#)
};

ParallelOptimum parallel_optimum_flows(const ParallelLinksSpec& spec);

/// Equilibrium beta link flows: f_beta^0 = d, f_beta^+ = d / (p/K+1)^(1/p).
double parallel_li_beta_flow(const ParallelLinksSpec& spec);
double parallel_pi_beta_flow(const ParallelLinksSpec& spec);

struct PoaTable {
  double poa_star_0;
  double poa_star_plus;
  double poa_hash_0;
  double poa_hash_plus;
};

/// The four closed-form Price-of-Anarchy entries for parallel links.
/// infinite_hosts replaces p/K by its K -> infinity limit 0.
PoaTable parallel_poa_table(const ParallelLinksSpec& spec, bool infinite_hosts = false);

struct LadderH2Result {
  double indirect_flow;   // F_1, per-host flow on the indirect path
  double poa_star_plus;   // exact (d, t, p) expression
  double poa_hash_plus;   // exact (d, t, p) expression
};

/// Closed-form PI equilibrium of the two-rung ladder.
LadderH2Result ladder_pi_h2(const LadderSpec& spec);

struct LadderH2WorstCase {
  double poa_star_plus;  // 1 + p/12, extremal over (d, t)
  double poa_hash_plus;  // 1 + p/3, the t -> infinity limit
};

LadderH2WorstCase ladder_pi_h2_worst_case(double p);

/// One row lambda*d - (a*t + b*lambda)*F_c - 2*t*F_d - lambda*F_f = 0 of the
/// ladder PI equilibrium system. Indices are 1-based; 0 means absent.
struct LadderEquation {
  int a, b;      // coefficient pair of the leading unknown
  int c, d, f;   // unknown indices
};

/// The equation system over unknowns F_1..F_{H-1} for the one-level-deviation
/// PI equilibrium structure.
std::vector<LadderEquation> ladder_equation_system(int H);

struct LadderSystemSolution {
  std::vector<double> indirect_flows;  // F_1..F_{H-1}
  double total_indirect;               // F_V = sum F_u
  double total_vertical_flow;          // f_V = 4 * F_V

  /// Link flows implied by the symmetric one-level-deviation structure.
  std::vector<double> horizontal_flows;        // f_{h_1}..f_{h_H}
  std::vector<double> vertical_flows_per_side; // gap g -> f on v_{g,1} (= v_{g,2})
};

/// Solves the system by Gaussian elimination.
/// Throws SingularSystemError when t = 0 and lambda = 0.
LadderSystemSolution ladder_solve_system(const LadderSpec& spec);

struct LadderPoaBound {
  double bound_H;    // 1 + 2(H-1)/(3H) * p
  double bound_inf;  // 1 + 2/3 * p
};

LadderPoaBound ladder_poa_bound(int H, double p);

}  // namespace anarchy
