#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "anarchy/closed_form.hpp"
#include "anarchy/flows.hpp"
#include "anarchy/solvers.hpp"
#include "anarchy/topologies.hpp"

using namespace anarchy;

namespace {

Network triangle_network() {
  Network net;
  net.ases = {{"A1"}, {"A2"}, {"A3"}};
  net.links = {{"alpha", "A1", "A2", CostPolynomial::constant(1.0)},
               {"gamma", "A1", "A3", CostPolynomial::monomial(1)},
               {"beta", "A3", "A2", CostPolynomial::monomial(2)}};
  net.endhosts = {{"e1", "A1"}, {"e4", "A2"}};
  net.demands = {{"e1", "e4", 1.0}};
  return net;
}

Network shared_links_network() {
  Network net;
  net.ases = {{"O"}, {"D"}};
  net.links = {{"a", "O", "D", CostPolynomial({0.0, 1.0})},
               {"b", "O", "D", CostPolynomial({1.0, 2.0})}};
  net.endhosts = {{"e1", "O"}, {"e2", "O"}, {"dst", "D"}};
  net.demands = {{"e1", "dst", 1.0}, {"e2", "dst", 1.0}};
  return net;
}

// Two parallel links under a single host: a constant alternative at 2 and a
// congestible link 1.5 + f. All comparisons below are against hand solutions
// of the resulting one-dimensional problems.
Network offset_pair_network() {
  Network net;
  net.ases = {{"O"}, {"D"}};
  net.links = {{"alpha", "O", "D", CostPolynomial({1.5, 1.0})},
               {"beta", "O", "D", CostPolynomial::constant(2.0)}};
  net.endhosts = {{"src", "O"}, {"dst", "D"}};
  net.demands = {{"src", "dst", 1.0}};
  return net;
}

double detour_flow(const EquilibriumResult& r) {
  // Triangle: detour is path 0.
  return r.pattern[0];
}

}  // namespace

TEST_CASE("triangle end-host optimum splits 1/3 onto the detour") {
  auto u = PathUniverse::build(triangle_network());
  auto r = solve_social_optimum(u, SocialObjective::EndHost);
  CHECK(r.status == SolveStatus::Converged);
  CHECK(detour_flow(r) == doctest::Approx(1.0 / 3.0).epsilon(1e-7));
  CHECK(endhost_cost(r.pattern) == doctest::Approx(22.0 / 27.0).epsilon(1e-10));
  CHECK(r.condition_report.clean());
}

TEST_CASE("triangle operator optimum routes everything on the constant link") {
  auto u = PathUniverse::build(triangle_network());
  auto r = solve_social_optimum(u, SocialObjective::Operator);
  CHECK(r.status == SolveStatus::Converged);
  CHECK(detour_flow(r) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(operator_cost(r.pattern) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.condition_report.clean());
}

TEST_CASE("triangle LI equilibrium equalizes path costs at the golden ratio") {
  auto u = PathUniverse::build(triangle_network());
  auto r = solve_li_equilibrium(u);
  CHECK(r.status == SolveStatus::Converged);
  double x = (std::sqrt(5.0) - 1.0) / 2.0;  // root of x + x^2 = 1
  CHECK(detour_flow(r) == doctest::Approx(x).epsilon(1e-7));
  CHECK(path_cost(r.pattern, 0) == doctest::Approx(path_cost(r.pattern, 1)).epsilon(1e-6));
  CHECK(r.condition_report.clean());
}

TEST_CASE("single-host PI equilibrium coincides with the end-host optimum") {
  auto u = PathUniverse::build(triangle_network());
  auto pi = solve_pi_equilibrium(u);
  auto opt = solve_social_optimum(u, SocialObjective::EndHost);
  CHECK(pi.status == SolveStatus::Converged);
  CHECK(pi.pattern.max_entry_distance(opt.pattern) < 1e-6);
  CHECK_FALSE(pi.oscillation_detected);
}

TEST_CASE("offset pair: LI and PI flows match the hand solutions") {
  auto u = PathUniverse::build(offset_pair_network());
  // alpha has free-flow cost 1.5 < 2, so it is path 0.
  REQUIRE(u.paths()[0].links == std::vector<std::string>{"alpha"});

  auto li = solve_li_equilibrium(u);
  CHECK(li.pattern[0] == doctest::Approx(0.5).epsilon(1e-7));  // 1.5 + f = 2

  auto pi = solve_pi_equilibrium(u);
  CHECK(pi.pattern[0] == doctest::Approx(0.25).epsilon(1e-7));  // min (1.5+f)f + 2(1-f)
  CHECK(endhost_cost(li.pattern) > endhost_cost(pi.pattern));
}

TEST_CASE("two hosts on shared links: analytic LI and PI equilibria") {
  auto u = PathUniverse::build(shared_links_network());
  auto li = solve_li_equilibrium(u);
  auto lf_li = link_flows(li.pattern);
  // Equal path costs: f_a = 1 + 2 f_b, f_a + f_b = 2 -> f_a = 5/3.
  CHECK(lf_li.by_id.at("a") == doctest::Approx(5.0 / 3.0).epsilon(1e-7));
  CHECK(lf_li.by_id.at("b") == doctest::Approx(1.0 / 3.0).epsilon(1e-7));

  auto pi = solve_pi_equilibrium(u);
  auto lf_pi = link_flows(pi.pattern);
  // Symmetric interior PI point: per-host marginals 3x = 7 - 6x -> x = 7/9.
  CHECK(lf_pi.by_id.at("a") == doctest::Approx(14.0 / 9.0).epsilon(1e-6));
  CHECK(lf_pi.by_id.at("b") == doctest::Approx(4.0 / 9.0).epsilon(1e-6));
  CHECK(pi.condition_report.clean());
  // Each host's selfish marginals are equalized across its used paths.
  for (const auto& check : pi.condition_report.checks) CHECK(check.used_spread < 1e-6);
}

TEST_CASE("solver results agree with a brute-force grid oracle") {
  auto u = PathUniverse::build(triangle_network());
  auto build = [&](double x) { return PathFlowPattern::create(u, {x, 1.0 - x}); };
  double best_x = 0.0, best_v = endhost_cost(build(0.0));
  for (int i = 1; i <= 100000; ++i) {
    double x = i / 100000.0;
    double v = endhost_cost(build(x));
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  auto r = solve_social_optimum(u, SocialObjective::EndHost);
  CHECK(detour_flow(r) == doctest::Approx(best_x).epsilon(1e-4));
  CHECK(endhost_cost(r.pattern) <= best_v + 1e-12);
}

TEST_CASE("parallel links solves reproduce the closed forms") {
  ParallelLinksSpec spec{.m = 2, .p = 2.0, .d = 1.0, .K = 4};
  auto net = gen_parallel_links(spec);
  auto u = PathUniverse::build(net);

  auto opt = solve_social_optimum(u, SocialObjective::EndHost);
  auto lf_opt = link_flows(opt.pattern);
  CHECK(lf_opt.by_id.at("beta") ==
        doctest::Approx(parallel_optimum_flows(spec).beta_flow_opt).epsilon(1e-6));
  CHECK(endhost_cost(opt.pattern) ==
        doctest::Approx(parallel_optimum_flows(spec).endhost_opt_cost).epsilon(1e-8));

  auto li = solve_li_equilibrium(u);
  CHECK(link_flows(li.pattern).by_id.at("beta") ==
        doctest::Approx(parallel_li_beta_flow(spec)).epsilon(1e-6));

  auto pi = solve_pi_equilibrium(u);
  CHECK(link_flows(pi.pattern).by_id.at("beta") ==
        doctest::Approx(parallel_pi_beta_flow(spec)).epsilon(1e-5));
}

TEST_CASE("ladder LI solution is symmetric across rungs and rails") {
  auto net = gen_ladder({.H = 3, .p = 1, .d = 1.0, .t = 0.5});
  auto u = PathUniverse::build(net);
  auto li = solve_li_equilibrium(u);
  CHECK(li.status == SolveStatus::Converged);
  auto lf = link_flows(li.pattern);
  CHECK(lf.by_id.at("h1") == doctest::Approx(lf.by_id.at("h3")).epsilon(1e-6));
  CHECK(lf.by_id.at("v11") == doctest::Approx(lf.by_id.at("v12")).epsilon(1e-6));
  CHECK(lf.by_id.at("v21") == doctest::Approx(lf.by_id.at("v22")).epsilon(1e-6));
  // Flow conservation: every rung demand is served.
  double total = 0.0;
  for (double f : li.pattern.entries()) total += f;
  CHECK(total == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("equilibria are invariant to best-response order randomization") {
  auto u = PathUniverse::build(shared_links_network());
  auto base = solve_pi_equilibrium(u);
  SolverConfig cfg;
  cfg.randomize_best_response_order = true;
  cfg.seed = 1234;
  auto shuffled = solve_pi_equilibrium(u, cfg);
  CHECK(base.pattern.max_entry_distance(shuffled.pattern) < 1e-6);
}

TEST_CASE("warm start is respected and converges to the same point") {
  auto u = PathUniverse::build(offset_pair_network());
  auto cold = solve_pi_equilibrium(u);
  auto start = PathFlowPattern::create(u, {0.9, 0.1});
  auto warm = solve_pi_equilibrium(u, {}, start);
  CHECK(cold.pattern.max_entry_distance(warm.pattern) < 1e-6);
}

TEST_CASE("diminishing step rule also reaches the optimum, more slowly") {
  auto u = PathUniverse::build(triangle_network());
  SolverConfig cfg;
  cfg.step_rule = SolverConfig::StepRule::Diminishing;
  cfg.grad_tolerance = 1e-6;
  auto r = solve_social_optimum(u, SocialObjective::EndHost, cfg);
  CHECK(detour_flow(r) == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("iteration cap yields NotConverged with a usable pattern") {
  // Diminishing steps cannot hit the interior equilibrium in one sweep.
  auto u = PathUniverse::build(triangle_network());
  SolverConfig cfg;
  cfg.max_iters = 1;
  cfg.grad_tolerance = 1e-12;
  cfg.step_rule = SolverConfig::StepRule::Diminishing;
  auto r = solve_li_equilibrium(u, cfg);
  CHECK(r.status == SolveStatus::NotConverged);
  CHECK(r.residual > 1e-12);
  double total = 0.0;
  for (double f : r.pattern.entries()) total += f;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("residual reported at a converged point is small") {
  auto u = PathUniverse::build(triangle_network());
  auto li = solve_li_equilibrium(u);
  CHECK(li.residual < 1e-6);
  auto opt = solve_social_optimum(u, SocialObjective::EndHost);
  CHECK(opt.residual < 1e-6);
}
