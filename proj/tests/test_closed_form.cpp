#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "anarchy/closed_form.hpp"
#include "anarchy/flows.hpp"
#include "anarchy/solvers.hpp"
#include "anarchy/topologies.hpp"

using namespace anarchy;

TEST_CASE("parallel links optimum flows and costs, p = 1 sanity values") {
  ParallelLinksSpec spec{.m = 1, .p = 1.0, .d = 1.0, .K = 1};
  auto opt = parallel_optimum_flows(spec);
  CHECK(opt.beta_flow_opt == doctest::Approx(0.5));
  // C*(F*) = f^2 + (d - f) d = 1/4 + 1/2 = 3/4.
  CHECK(opt.endhost_opt_cost == doctest::Approx(0.75));
  CHECK(opt.operator_opt_cost == doctest::Approx(1.0));
  CHECK(parallel_li_beta_flow(spec) == doctest::Approx(1.0));
  // f+ = d / (p/K + 1)^{1/p} = 1/2 for a single host.
  CHECK(parallel_pi_beta_flow(spec) == doctest::Approx(0.5));
}

TEST_CASE("parallel links optimum flows for general p match first-order conditions") {
  for (double p : {1.0, 2.0, 3.0, 4.0}) {
    for (double d : {0.5, 1.0, 2.0}) {
      ParallelLinksSpec spec{.m = 3, .p = p, .d = d, .K = 5};
      auto opt = parallel_optimum_flows(spec);
      double f = opt.beta_flow_opt;
      // Stationarity of f^{p+1} + (d - f) d^p: (p+1) f^p = d^p.
      CHECK((p + 1.0) * std::pow(f, p) == doctest::Approx(std::pow(d, p)).epsilon(1e-12));
      // Closed-form cost equals the direct evaluation at f.
      CHECK(opt.endhost_opt_cost ==
            doctest::Approx(std::pow(f, p + 1.0) + (d - f) * std::pow(d, p)).epsilon(1e-12));
      CHECK(opt.operator_opt_cost == doctest::Approx(3.0 * std::pow(d, p)));
      // PI flow satisfies the per-host equilibrium condition
      // f^p + (f/K) p f^{p-1} = d^p.
      double fp = parallel_pi_beta_flow(spec);
      CHECK(std::pow(fp, p) * (1.0 + p / spec.K) ==
            doctest::Approx(std::pow(d, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("parallel links PoA table entries") {
  ParallelLinksSpec spec{.m = 1, .p = 1.0, .d = 1.0, .K = 1};
  auto t = parallel_poa_table(spec);
  CHECK(t.poa_star_0 == doctest::Approx(4.0 / 3.0));   // classic linear bound
  CHECK(t.poa_hash_0 == doctest::Approx(2.0));         // (m+1)/m at m = 1
  // Single host: PI equals the end-host optimum, so PoA*+ = 1.
  CHECK(t.poa_star_plus == doctest::Approx(1.0));
  // C#(F+) = d^p + (f+/d)^p d^p = (1 + 1/2) d^p over C#(F#) = d^p.
  CHECK(t.poa_hash_plus == doctest::Approx(1.5));

  // Cross-check against costs evaluated at the closed-form flows.
  for (double p : {1.0, 2.0, 3.0}) {
    ParallelLinksSpec s{.m = 2, .p = p, .d = 1.5, .K = 7};
    auto opt = parallel_optimum_flows(s);
    double dp = std::pow(s.d, p);
    auto cost_star = [&](double f) { return std::pow(f, p + 1.0) + (s.d - f) * dp; };
    auto cost_hash = [&](double f) { return 2.0 * dp + std::pow(f, p); };
    auto table = parallel_poa_table(s);
    CHECK(table.poa_star_0 ==
          doctest::Approx(cost_star(parallel_li_beta_flow(s)) / opt.endhost_opt_cost));
    CHECK(table.poa_star_plus ==
          doctest::Approx(cost_star(parallel_pi_beta_flow(s)) / opt.endhost_opt_cost));
    CHECK(table.poa_hash_0 ==
          doctest::Approx(cost_hash(parallel_li_beta_flow(s)) / opt.operator_opt_cost));
    CHECK(table.poa_hash_plus ==
          doctest::Approx(cost_hash(parallel_pi_beta_flow(s)) / opt.operator_opt_cost));
  }
}

TEST_CASE("many hosts drive PI back to the LI outcome") {
  ParallelLinksSpec spec{.m = 2, .p = 3.0, .d = 1.0, .K = 1000000000};
  auto finite = parallel_poa_table(spec);
  auto limit = parallel_poa_table(spec, true);
  CHECK(limit.poa_star_plus == doctest::Approx(limit.poa_star_0));
  CHECK(limit.poa_hash_plus == doctest::Approx(limit.poa_hash_0));
  CHECK(finite.poa_star_plus == doctest::Approx(limit.poa_star_plus).epsilon(1e-6));
  CHECK(finite.poa_hash_plus == doctest::Approx(limit.poa_hash_plus).epsilon(1e-6));
}

TEST_CASE("two-rung ladder closed form") {
  LadderSpec spec{.H = 2, .p = 1.0, .d = 1.0, .t = 1.0};
  auto r = ladder_pi_h2(spec);
  CHECK(r.indirect_flow == doctest::Approx(1.0 / 8.0));  // lambda d / (6t + 2 lambda)
  CHECK(r.poa_star_plus == doctest::Approx(1.0 + 4.0 * (1.0 / 8.0) * (1.0 / 8.0)));
  CHECK(r.poa_hash_plus == doctest::Approx(1.0 + 2.0 * (1.0 / 8.0)));

  // Zero demand degenerates to unit ratios.
  auto zero = ladder_pi_h2({.H = 2, .p = 2.0, .d = 0.0, .t = 1.0});
  CHECK(zero.indirect_flow == 0.0);
  CHECK(zero.poa_star_plus == 1.0);
  CHECK(zero.poa_hash_plus == 1.0);

  CHECK_THROWS_AS(ladder_pi_h2({.H = 3, .p = 1.0, .d = 1.0, .t = 1.0}),
                  InvalidArgumentError);
}

TEST_CASE("two-rung worst cases: p/12 peak in t and p/3 limit") {
  for (double p : {1.0, 2.0, 4.0}) {
    auto wc = ladder_pi_h2_worst_case(p);
    CHECK(wc.poa_star_plus == doctest::Approx(1.0 + p / 12.0));
    CHECK(wc.poa_hash_plus == doctest::Approx(1.0 + p / 3.0));

    // The t-maximum of PoA*+ sits at t = lambda/3 and attains 1 + p/12.
    LadderSpec base{.H = 2, .p = p, .d = 1.0, .t = 0.0};
    double lambda = base.lambda();
    base.t = lambda / 3.0;
    CHECK(ladder_pi_h2(base).poa_star_plus == doctest::Approx(wc.poa_star_plus));
    for (double t : {0.01, 0.1, 1.0, 10.0, 300.0}) {
      base.t = t;
      CHECK(ladder_pi_h2(base).poa_star_plus <= wc.poa_star_plus + 1e-12);
      CHECK(ladder_pi_h2(base).poa_hash_plus <= wc.poa_hash_plus + 1e-12);
    }
    // PoA#+ approaches its supremum from below as t grows.
    base.t = 1e9;
    CHECK(ladder_pi_h2(base).poa_hash_plus == doctest::Approx(wc.poa_hash_plus).epsilon(1e-6));
  }
}

TEST_CASE("ladder equation system size and aggregate coefficients") {
  for (int H = 2; H <= 12; ++H) {
    auto rows = ladder_equation_system(H);
    REQUIRE(rows.size() == static_cast<std::size_t>(H - 1));
    // Summing all rows must give (H-1) lambda d on the left and coefficient
    // totals (6t + 2 lambda) F_1 + (6t + 3 lambda) sum_{u >= 2} F_u.
    std::vector<int> t_coeff(H, 0), l_coeff(H, 0);  // 1-based unknowns
    for (const auto& e : rows) {
      REQUIRE(e.c >= 1);
      REQUIRE(e.c <= H - 1);
      t_coeff[e.c] += e.a;
      l_coeff[e.c] += e.b;
      if (e.d > 0) t_coeff[e.d] += 2;
      if (e.f > 0) l_coeff[e.f] += 1;
    }
    CHECK(t_coeff[1] == 6);
    CHECK(l_coeff[1] == 2);
    for (int u = 2; u <= H - 1; ++u) {
      CHECK(t_coeff[u] == 6);
      CHECK(l_coeff[u] == 3);
    }
  }
}

TEST_CASE("ladder system solution: H = 2 agrees with the scalar closed form") {
  for (double t : {0.2, 1.0, 25.0}) {
    LadderSpec spec{.H = 2, .p = 2.0, .d = 1.5, .t = t};
    auto sol = ladder_solve_system(spec);
    REQUIRE(sol.indirect_flows.size() == 1);
    CHECK(sol.indirect_flows[0] == doctest::Approx(ladder_pi_h2(spec).indirect_flow));
    CHECK(sol.total_vertical_flow == doctest::Approx(4.0 * sol.indirect_flows[0]));
    REQUIRE(sol.horizontal_flows.size() == 2);
    CHECK(sol.horizontal_flows[0] == doctest::Approx(spec.d));
    CHECK(sol.horizontal_flows[1] == doctest::Approx(spec.d));
    REQUIRE(sol.vertical_flows_per_side.size() == 1);
    CHECK(sol.vertical_flows_per_side[0] == doctest::Approx(2.0 * sol.indirect_flows[0]));
  }
}

TEST_CASE("ladder system solution structure for larger H") {
  for (int H : {3, 4, 5, 8, 9}) {
    LadderSpec spec{.H = H, .p = 1.0, .d = 1.0, .t = 2.0};
    auto sol = ladder_solve_system(spec);
    REQUIRE(sol.indirect_flows.size() == static_cast<std::size_t>(H - 1));
    double sum = 0.0;
    for (double f : sol.indirect_flows) {
      CHECK(f > 0.0);
      CHECK(f < spec.d);
      sum += f;
    }
    CHECK(sol.total_indirect == doctest::Approx(sum));
    CHECK(sol.total_vertical_flow == doctest::Approx(4.0 * sum));
    // Horizontal flows stay near d and vertical flows are mirror-symmetric
    // in the aggregate: sum of per-side vertical flows equals 2 F_V.
    double vsum = 0.0;
    for (double v : sol.vertical_flows_per_side) {
      CHECK(v >= 0.0);
      vsum += v;
    }
    CHECK(vsum == doctest::Approx(2.0 * sum));
    for (double h : sol.horizontal_flows) {
      CHECK(h > 0.0);
      CHECK(h <= spec.d + sum);
    }
    // Larger t suppresses indirect traffic.
    auto stiffer = ladder_solve_system({.H = H, .p = 1.0, .d = 1.0, .t = 20.0});
    CHECK(stiffer.total_indirect < sol.total_indirect);
  }
}

TEST_CASE("degenerate ladder system throws") {
  CHECK_THROWS_AS(ladder_solve_system({.H = 3, .p = 2.0, .d = 0.0, .t = 0.0}),
                  SingularSystemError);
}

TEST_CASE("two-rung system matches the simulated PI equilibrium exactly") {
  // For H = 2 both horizontal links carry exactly d at the symmetric
  // equilibrium, so the linearized system is exact for every p.
  for (double p : {1.0, 2.0}) {
    LadderSpec spec{.H = 2, .p = p, .d = 1.5, .t = 0.8};
    auto net = gen_ladder(spec);
    auto u = PathUniverse::build(net);
    auto pi = solve_pi_equilibrium(u);
    REQUIRE(pi.status == SolveStatus::Converged);
    double f1 = ladder_pi_h2(spec).indirect_flow;
    auto lf = link_flows(pi.pattern);
    CHECK(lf.by_id.at("v11") == doctest::Approx(2.0 * f1).epsilon(1e-6));
    CHECK(lf.by_id.at("h1") == doctest::Approx(spec.d).epsilon(1e-6));
    CHECK(lf.by_id.at("h2") == doctest::Approx(spec.d).epsilon(1e-6));
  }
}

TEST_CASE("three-rung system approximates the simulated PI equilibrium at large t") {
  LadderSpec spec{.H = 3, .p = 1.0, .d = 1.0, .t = 100.0};
  auto sol = ladder_solve_system(spec);
  auto net = gen_ladder(spec);
  auto u = PathUniverse::build(net);
  auto pi = solve_pi_equilibrium(u);
  REQUIRE(pi.status == SolveStatus::Converged);
  auto lf = link_flows(pi.pattern);
  double sim_vertical = lf.by_id.at("v11") + lf.by_id.at("v12") + lf.by_id.at("v21") +
                        lf.by_id.at("v22");
  CHECK(sim_vertical == doctest::Approx(sol.total_vertical_flow).epsilon(0.02));
  for (int i = 0; i < 3; ++i)
    CHECK(lf.by_id.at("h" + std::to_string(i + 1)) ==
          doctest::Approx(sol.horizontal_flows[i]).epsilon(0.02));
}

TEST_CASE("ladder PoA bound grows with H toward 1 + 2p/3") {
  auto b2 = ladder_poa_bound(2, 3.0);
  CHECK(b2.bound_H == doctest::Approx(2.0));      // 1 + 2(1)/(6) * 3
  CHECK(b2.bound_inf == doctest::Approx(3.0));    // 1 + 2p/3
  double prev = 0.0;
  for (int H = 2; H <= 64; H *= 2) {
    auto b = ladder_poa_bound(H, 1.0);
    CHECK(b.bound_H > prev);
    CHECK(b.bound_H < b.bound_inf);
    prev = b.bound_H;
  }
  CHECK(ladder_poa_bound(100000, 1.0).bound_H ==
        doctest::Approx(1.0 + 2.0 / 3.0).epsilon(1e-4));
}
