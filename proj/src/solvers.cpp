#include "anarchy/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>

#include "anarchy/errors.hpp"

namespace anarchy {

namespace {

constexpr double kUsedEps = 1e-12;

// Mutable solver state: path entries plus incrementally maintained link flows
// (and, for the selfish objective, the acting host's own link flows).
struct Workspace {
  const PathUniverse& u;
  Objective obj;
  std::vector<double> entries;
  std::vector<double> f;
  std::vector<double> fe;  // only meaningful for Objective::Kind::Selfish

  Workspace(const PathUniverse& universe, Objective objective, std::vector<double> init)
      : u(universe), obj(std::move(objective)), entries(std::move(init)),
        f(universe.link_count(), 0.0) {
    for (std::size_t p = 0; p < entries.size(); ++p)
      for (std::size_t li : u.path_links(p)) f[li] += entries[p];
    if (obj.kind == Objective::Kind::Selfish) rebuild_host_flows();
  }

  void rebuild_host_flows() {
    fe.assign(u.link_count(), 0.0);
    for (std::size_t b : u.blocks_of_host(obj.endhost)) {
      const OdBlock& block = u.blocks()[b];
      for (std::size_t p = block.first_path; p < block.first_path + block.path_count; ++p)
        for (std::size_t li : u.path_links(p)) fe[li] += entries[p];
    }
  }

  double link_term(std::size_t li) const {
    const CostPolynomial& c = u.link_cost(li);
    switch (obj.kind) {
      case Objective::Kind::EndHost: return c.value(f[li]) + f[li] * c.derivative(f[li]);
      case Objective::Kind::Operator: return c.derivative(f[li]);
      case Objective::Kind::Beckmann: return c.value(f[li]);
      case Objective::Kind::Selfish: return c.value(f[li]) + fe[li] * c.derivative(f[li]);
    }
    return 0.0;
  }

  double marginal(std::size_t p) const {
    double g = 0.0;
    for (std::size_t li : u.path_links(p)) g += link_term(li);
    return g;
  }

  // Shift tau units of flow from path a to path b.
  void apply_move(std::size_t a, std::size_t b, double tau) {
    entries[a] -= tau;
    entries[b] += tau;
    if (entries[a] < 0.0) entries[a] = 0.0;
    for (std::size_t li : u.path_links(a)) f[li] -= tau;
    for (std::size_t li : u.path_links(b)) f[li] += tau;
    if (obj.kind == Objective::Kind::Selfish) {
      for (std::size_t li : u.path_links(a)) fe[li] -= tau;
      for (std::size_t li : u.path_links(b)) fe[li] += tau;
    }
  }
};

// Exact line search for the transfer a -> b: the directional derivative
// marginal(b) - marginal(a) is non-decreasing in tau (convexity), so the
// minimizer is the corner or the root, isolated by bisection.
double exact_transfer(Workspace& w, std::size_t a, std::size_t b, double tau_max) {
  w.apply_move(a, b, tau_max);
  double d_hi = w.marginal(b) - w.marginal(a);
  if (d_hi <= 0.0) return tau_max;  // full transfer, leave applied
  w.apply_move(b, a, tau_max);

  double lo = 0.0, hi = tau_max;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + tau_max); ++it) {
    double mid = 0.5 * (lo + hi);
    w.apply_move(a, b, mid);
    double d = w.marginal(b) - w.marginal(a);
    w.apply_move(b, a, mid);
    if (d < 0.0) lo = mid;
    else hi = mid;
  }
  double tau = 0.5 * (lo + hi);
  w.apply_move(a, b, tau);
  return tau;
}

// Equilibrate one block: drain flow from the worst used path toward the best
// path until the marginal gap closes. Returns the largest entry change seen.
double equilibrate_block(Workspace& w, const OdBlock& block, double tol, bool exact_search,
                         int diminishing_counter = 0) {
  if (block.path_count < 2 || block.volume <= 0.0) return 0.0;
  double max_change = 0.0;
  const int max_inner = 64 * static_cast<int>(block.path_count);
  for (int it = 0; it < max_inner; ++it) {
    std::size_t best = block.first_path, worst = block.first_path;
    double g_best = 0.0, g_worst = 0.0;
    bool have_worst = false;
    for (std::size_t p = block.first_path; p < block.first_path + block.path_count; ++p) {
      double g = w.marginal(p);
      if (p == block.first_path || g < g_best) {
        g_best = g;
        best = p;
      }
      if (w.entries[p] > kUsedEps * (1.0 + block.volume) && (!have_worst || g > g_worst)) {
        g_worst = g;
        worst = p;
        have_worst = true;
      }
    }
    if (!have_worst || worst == best) return max_change;
    double scale = 1.0 + std::abs(g_best);
    if (g_worst - g_best <= tol * scale) return max_change;
    double tau_max = w.entries[worst];
    double tau;
    if (exact_search) {
      tau = exact_transfer(w, worst, best, tau_max);
    } else {
      tau = tau_max * 2.0 / (diminishing_counter + it + 2.0);
      w.apply_move(worst, best, tau);
    }
    max_change = std::max(max_change, tau);
    if (tau <= 0.0) return max_change;
  }
  return max_change;
}

// Residual: worst relative marginal spread over used paths, per block.
double block_residual(const Workspace& w, const OdBlock& block) {
  if (block.path_count < 2) return 0.0;
  double g_min = 0.0, g_used_max = 0.0;
  bool first = true, any_used = false;
  for (std::size_t p = block.first_path; p < block.first_path + block.path_count; ++p) {
    double g = w.marginal(p);
    if (first || g < g_min) g_min = g;
    first = false;
    if (w.entries[p] > kUsedEps * (1.0 + block.volume)) {
      if (!any_used || g > g_used_max) g_used_max = g;
      any_used = true;
    }
  }
  if (!any_used) return 0.0;
  return (g_used_max - g_min) / (1.0 + std::abs(g_min));
}

ConditionCheck check_block(const Workspace& w, const OdBlock& block, const std::string& scope) {
  ConditionCheck c;
  c.scope = scope;
  double used_min = 0.0, used_max = 0.0;
  bool any_used = false;
  std::vector<double> gs(block.path_count);
  for (std::size_t i = 0; i < block.path_count; ++i) {
    std::size_t p = block.first_path + i;
    gs[i] = w.marginal(p);
    if (w.entries[p] > kUsedEps * (1.0 + block.volume)) {
      if (!any_used) {
        used_min = used_max = gs[i];
        any_used = true;
      } else {
        used_min = std::min(used_min, gs[i]);
        used_max = std::max(used_max, gs[i]);
      }
    }
  }
  if (!any_used) {
    c.clean = true;
    return c;
  }
  c.level = used_min;
  c.used_spread = used_max - used_min;
  for (std::size_t i = 0; i < block.path_count; ++i) {
    std::size_t p = block.first_path + i;
    if (w.entries[p] <= kUsedEps * (1.0 + block.volume))
      c.unused_violation = std::max(c.unused_violation, c.level - gs[i]);
  }
  double mag = 1.0 + std::abs(c.level);
  c.clean = c.used_spread <= 1e-6 * mag && c.unused_violation <= 1e-6 * mag;
  return c;
}

EquilibriumResult minimize_over_blocks(const PathUniverse& universe, const Objective& obj,
                                       const SolverConfig& cfg, std::vector<double> init,
                                       const char* scope_prefix) {
  Workspace w(universe, obj, std::move(init));
  bool exact = cfg.step_rule == SolverConfig::StepRule::ExactLineSearch;
  double residual = 0.0;
  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    for (const OdBlock& block : universe.blocks())
      equilibrate_block(w, block, cfg.grad_tolerance * 0.25, exact, iter);
    residual = 0.0;
    for (const OdBlock& block : universe.blocks())
      residual = std::max(residual, block_residual(w, block));
    if (residual <= cfg.grad_tolerance) {
      ++iter;
      break;
    }
  }

  EquilibriumResult result{PathFlowPattern::create(universe, w.entries), iter, residual,
                           residual <= cfg.grad_tolerance ? SolveStatus::Converged
                                                          : SolveStatus::NotConverged,
                           false, {}};
  for (const OdBlock& block : universe.blocks())
    result.condition_report.checks.push_back(check_block(
        w, block, std::string(scope_prefix) + block.origin + "->" + block.destination));
  return result;
}

}  // namespace

EquilibriumResult solve_social_optimum(const PathUniverse& universe,
                                       SocialObjective objective, const SolverConfig& cfg) {
  Objective obj = objective == SocialObjective::EndHost ? Objective::endhost_total()
                                                        : Objective::operator_total();
  return minimize_over_blocks(universe, obj, cfg,
                              PathFlowPattern::equal_split(universe).entries(), "od:");
}

EquilibriumResult solve_li_equilibrium(const PathUniverse& universe, const SolverConfig& cfg) {
  return minimize_over_blocks(universe, Objective::beckmann(), cfg,
                              PathFlowPattern::equal_split(universe).entries(), "od:");
}

EquilibriumResult solve_pi_equilibrium(const PathUniverse& universe, const SolverConfig& cfg,
                                       std::optional<PathFlowPattern> init) {
  std::vector<double> entries = init ? init->entries()
                                     : PathFlowPattern::equal_split(universe).entries();

  // Hosts with at least one positive-demand block, in deterministic id order.
  std::vector<std::string> hosts;
  for (const OdBlock& b : universe.blocks())
    if (std::find(hosts.begin(), hosts.end(), b.origin) == hosts.end())
      hosts.push_back(b.origin);
  std::sort(hosts.begin(), hosts.end());
  std::mt19937 rng(cfg.seed);
  if (cfg.randomize_best_response_order) std::shuffle(hosts.begin(), hosts.end(), rng);

  bool exact = cfg.step_rule == SolverConfig::StepRule::ExactLineSearch;
  double sweep_change = 0.0;
  int sweeps = 0;
  bool oscillating = false;
  std::deque<double> change_window;
  for (; sweeps < cfg.max_iters; ++sweeps) {
    sweep_change = 0.0;
    for (const std::string& host : hosts) {
      Workspace w(universe, Objective::selfish(host), entries);
      for (std::size_t bi : universe.blocks_of_host(host))
        sweep_change = std::max(sweep_change,
                                equilibrate_block(w, universe.blocks()[bi],
                                                  cfg.br_sweep_tolerance * 0.1, exact, sweeps));
      entries = std::move(w.entries);
    }
    change_window.push_back(sweep_change);
    if (change_window.size() > 50) {
      change_window.pop_front();
      // Sweep-change not decreasing over the window: report oscillation.
      if (change_window.back() >= change_window.front() && sweep_change > cfg.br_sweep_tolerance)
        oscillating = true;
    }
    if (sweep_change < cfg.br_sweep_tolerance) {
      ++sweeps;
      break;
    }
  }

  EquilibriumResult result{PathFlowPattern::create(universe, entries), sweeps, sweep_change,
                           sweep_change < cfg.br_sweep_tolerance ? SolveStatus::Converged
                                                                 : SolveStatus::NotConverged,
                           oscillating, {}};
  for (const std::string& host : hosts) {
    Workspace w(universe, Objective::selfish(host), result.pattern.entries());
    for (std::size_t bi : universe.blocks_of_host(host)) {
      const OdBlock& block = universe.blocks()[bi];
      result.condition_report.checks.push_back(
          check_block(w, block, "host:" + host + " od:" + block.origin + "->" + block.destination));
    }
  }
  return result;
}

}  // namespace anarchy
