#include "anarchy/metrics.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <memory>

#include "anarchy/errors.hpp"

namespace anarchy {

namespace {

constexpr double kZeroCost = 1e-15;

double ratio_or_one(double numerator, double denominator, bool* degenerate) {
  if (std::abs(denominator) <= kZeroCost) {
    if (degenerate) *degenerate = true;
    return 1.0;
  }
  return numerator / denominator;
}

}  // namespace

double compute_voi(double poa_li, double poa_pi) {
  if (poa_li < 1.0 - 1e-9) throw InvalidArgumentError("PoA under LI must be >= 1");
  return (poa_li - poa_pi) / poa_li;
}

PoAComputation compute_poa(const PathUniverse& universe, const SolverConfig& cfg,
                           const std::string& scenario) {
  PoAComputation out{
      {},
      solve_social_optimum(universe, SocialObjective::EndHost, cfg),
      solve_social_optimum(universe, SocialObjective::Operator, cfg),
      solve_li_equilibrium(universe, cfg),
      solve_pi_equilibrium(universe, cfg),
  };
  PoAReport& r = out.report;
  r.scenario = scenario;
  double star_opt = endhost_cost(out.endhost_optimum.pattern);
  double hash_opt = operator_cost(out.operator_optimum.pattern);
  r.poa_star_0 = ratio_or_one(endhost_cost(out.li_equilibrium.pattern), star_opt, &r.degenerate);
  r.poa_star_plus =
      ratio_or_one(endhost_cost(out.pi_equilibrium.pattern), star_opt, &r.degenerate);
  r.poa_hash_0 =
      ratio_or_one(operator_cost(out.li_equilibrium.pattern), hash_opt, &r.degenerate);
  r.poa_hash_plus =
      ratio_or_one(operator_cost(out.pi_equilibrium.pattern), hash_opt, &r.degenerate);
  r.voi_star = (r.poa_star_0 - r.poa_star_plus) / r.poa_star_0;
  r.voi_hash = (r.poa_hash_0 - r.poa_hash_plus) / r.poa_hash_0;
  r.residual_opt = std::max(out.endhost_optimum.residual, out.operator_optimum.residual);
  r.residual_li = out.li_equilibrium.residual;
  r.residual_pi = out.pi_equilibrium.residual;
  r.all_converged = out.endhost_optimum.status == SolveStatus::Converged &&
                    out.operator_optimum.status == SolveStatus::Converged &&
                    out.li_equilibrium.status == SolveStatus::Converged &&
                    out.pi_equilibrium.status == SolveStatus::Converged;
  return out;
}

namespace {

// Carry a converged pattern over to a freshly enumerated universe: flows of
// paths present in both are kept, mass on dropped paths moves to the block's
// first path, then the block is re-normalized.
PathFlowPattern project_pattern(const PathUniverse& target, const PathFlowPattern& source) {
  std::map<std::pair<std::string, std::string>, std::map<std::vector<std::string>, double>>
      lookup;
  const PathUniverse& su = source.universe();
  for (std::size_t p = 0; p < su.paths().size(); ++p) {
    const Path& path = su.paths()[p];
    lookup[{path.origin, path.destination}][path.links] = source[p];
  }
  std::vector<double> entries(target.paths().size(), 0.0);
  for (const OdBlock& b : target.blocks()) {
    auto od = lookup.find({b.origin, b.destination});
    double assigned = 0.0;
    for (std::size_t p = b.first_path; p < b.first_path + b.path_count; ++p) {
      if (od != lookup.end()) {
        auto hit = od->second.find(target.paths()[p].links);
        if (hit != od->second.end()) entries[p] = hit->second;
      }
      assigned += entries[p];
    }
    entries[b.first_path] += std::max(0.0, b.volume - assigned);
    double sum = 0.0;
    for (std::size_t p = b.first_path; p < b.first_path + b.path_count; ++p) sum += entries[p];
    if (sum > 0.0) {
      double scale = b.volume / sum;
      for (std::size_t p = b.first_path; p < b.first_path + b.path_count; ++p)
        entries[p] *= scale;
    }
  }
  return PathFlowPattern::create(target, std::move(entries));
}

}  // namespace

std::vector<SweepEntry> run_multipath_sweep(const Network& net,
                                            const std::vector<std::size_t>& k_values,
                                            const SolverConfig& cfg) {
  if (k_values.empty()) throw InvalidArgumentError("k_values must be non-empty");
  for (std::size_t k : k_values)
    if (k < 1) throw InvalidArgumentError("every k must be >= 1");

  // Optima on the unrestricted path set pin the denominators across the sweep.
  auto full = PathUniverse::build(net);
  auto endhost_opt = solve_social_optimum(full, SocialObjective::EndHost, cfg);
  auto operator_opt = solve_social_optimum(full, SocialObjective::Operator, cfg);
  double star_opt = endhost_cost(endhost_opt.pattern);
  double hash_opt = operator_cost(operator_opt.pattern);

  std::vector<SweepEntry> entries;
  // The previous k's universe must stay alive as long as its pattern is used
  // for warm-starting, so it is owned here rather than inside the loop.
  std::unique_ptr<PathUniverse> prev_universe;
  std::optional<PathFlowPattern> prev_pi;
  for (std::size_t k : k_values) {
    SweepEntry entry;
    entry.k = k;
    auto t0 = std::chrono::steady_clock::now();
    try {
      auto universe = std::make_unique<PathUniverse>(PathUniverse::build(net, k));
      auto li = solve_li_equilibrium(*universe, cfg);
      std::optional<PathFlowPattern> pi_init;
      if (prev_pi) pi_init = project_pattern(*universe, *prev_pi);
      auto pi = solve_pi_equilibrium(*universe, cfg, pi_init);
      prev_pi = pi.pattern;
      prev_universe = std::move(universe);

      PoAReport& r = entry.report;
      r.scenario = "sweep k=" + std::to_string(k);
      r.poa_star_0 = ratio_or_one(endhost_cost(li.pattern), star_opt, &r.degenerate);
      r.poa_star_plus = ratio_or_one(endhost_cost(pi.pattern), star_opt, &r.degenerate);
      r.poa_hash_0 = ratio_or_one(operator_cost(li.pattern), hash_opt, &r.degenerate);
      r.poa_hash_plus = ratio_or_one(operator_cost(pi.pattern), hash_opt, &r.degenerate);
      r.voi_star = (r.poa_star_0 - r.poa_star_plus) / r.poa_star_0;
      r.voi_hash = (r.poa_hash_0 - r.poa_hash_plus) / r.poa_hash_0;
      r.residual_opt = std::max(endhost_opt.residual, operator_opt.residual);
      r.residual_li = li.residual;
      r.residual_pi = pi.residual;
      r.all_converged = li.status == SolveStatus::Converged &&
                        pi.status == SolveStatus::Converged &&
                        endhost_opt.status == SolveStatus::Converged &&
                        operator_opt.status == SolveStatus::Converged;
    } catch (const std::exception& e) {
      entry.solver_error = true;
      entry.error_message = e.what();
    }
    entry.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace anarchy
