#include "anarchy/closed_form.hpp"

#include <cmath>
#include <cstddef>

namespace anarchy {

namespace {
void check_parallel(const ParallelLinksSpec& s) {
  if (s.m < 1 || s.p < 1.0 || s.d < 0.0 || s.K < 1)
    throw InvalidArgumentError("invalid parallel-links spec");
}
void check_ladder(const LadderSpec& s) {
  if (s.H < 2 || s.p < 1.0 || s.d < 0.0 || s.t < 0.0)
    throw InvalidArgumentError("invalid ladder spec");
}
}  // namespace

double LadderSpec::lambda() const { return p * std::pow(d, p - 1.0); }

ParallelOptimum parallel_optimum_flows(const ParallelLinksSpec& spec) {
  check_parallel(spec);
  if (spec.d == 0.0) return {0.0, 0.0, 0.0};
  double p = spec.p, d = spec.d;
  double beta = d / std::pow(p + 1.0, 1.0 / p);
  double endhost = std::pow(d, p + 1.0) * (1.0 - p / std::pow(p + 1.0, (p + 1.0) / p));
  double op = spec.m * std::pow(d, p);
  return {beta, endhost, op};
}

double parallel_li_beta_flow(const ParallelLinksSpec& spec) {
  check_parallel(spec);
  return spec.d;
}

double parallel_pi_beta_flow(const ParallelLinksSpec& spec) {
  check_parallel(spec);
  return spec.d / std::pow(spec.p / spec.K + 1.0, 1.0 / spec.p);
}

PoaTable parallel_poa_table(const ParallelLinksSpec& spec, bool infinite_hosts) {
  check_parallel(spec);
  double p = spec.p;
  double pk = infinite_hosts ? 0.0 : p / spec.K;
  double li_factor = 1.0 - p / std::pow(p + 1.0, (p + 1.0) / p);
  double pi_factor = 1.0 - pk / std::pow(pk + 1.0, (p + 1.0) / p);
  PoaTable t;
  t.poa_star_0 = 1.0 / li_factor;
  t.poa_star_plus = pi_factor / li_factor;
  t.poa_hash_0 = (spec.m + 1.0) / spec.m;
  t.poa_hash_plus = (spec.m + 1.0 / (pk + 1.0)) / spec.m;
  return t;
}

LadderH2Result ladder_pi_h2(const LadderSpec& spec) {
  check_ladder(spec);
  if (spec.H != 2) throw InvalidArgumentError("ladder_pi_h2 requires H = 2");
  if (spec.d == 0.0) return {0.0, 1.0, 1.0};
  double lambda = spec.lambda();
  double f1 = lambda * spec.d / (6.0 * spec.t + 2.0 * lambda);
  double dp1 = std::pow(spec.d, spec.p + 1.0);
  double dp = std::pow(spec.d, spec.p);
  LadderH2Result r;
  r.indirect_flow = f1;
  r.poa_star_plus = (2.0 * dp1 + 2.0 * spec.t * (2.0 * f1) * (2.0 * f1)) / (2.0 * dp1);
  r.poa_hash_plus = (2.0 * dp + 4.0 * spec.t * f1) / (2.0 * dp);
  return r;
}

LadderH2WorstCase ladder_pi_h2_worst_case(double p) {
  if (p < 1.0) throw InvalidArgumentError("p must be >= 1");
  return {1.0 + p / 12.0, 1.0 + p / 3.0};
}

std::vector<LadderEquation> ladder_equation_system(int H) {
  if (H < 2) throw InvalidArgumentError("ladder requires H >= 2");
  std::vector<LadderEquation> rows;
  if (H == 2) {
    rows.push_back({6, 2, 1, 0, 0});
  } else if (H == 3) {
    rows.push_back({4, 2, 1, 2, 0});
    rows.push_back({4, 3, 2, 1, 0});
  } else if (H % 2 == 0) {
    rows.push_back({4, 2, 1, 2, 0});
    rows.push_back({4, 2, 2, 1, 3});
    for (int j = 3; j <= H - 3; j += 2) {
      rows.push_back({4, 2, j, j + 1, j - 1});
      rows.push_back({4, 2, j + 1, j, j + 2});
    }
    rows.push_back({6, 2, H - 1, 0, H - 2});
  } else {
    rows.push_back({4, 2, 1, 2, 0});
    rows.push_back({4, 2, 2, 1, 3});
    for (int j = 3; j <= H - 4; j += 2) {
      rows.push_back({4, 2, j, j + 1, j - 1});
      rows.push_back({4, 2, j + 1, j, j + 2});
    }
    rows.push_back({4, 2, H - 2, H - 1, H - 3});
    rows.push_back({4, 3, H - 1, H - 2, 0});
  }
  return rows;
}

LadderSystemSolution ladder_solve_system(const LadderSpec& spec) {
  check_ladder(spec);
  double lambda = spec.lambda();
  double t = spec.t;
  if (t == 0.0 && lambda == 0.0)
    throw SingularSystemError("ladder system singular: t = 0 and lambda = 0");

  int n = spec.H - 1;
  auto rows = ladder_equation_system(spec.H);
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (int r = 0; r < n; ++r) {
    const LadderEquation& e = rows[r];
    a[r][e.c - 1] += e.a * t + e.b * lambda;
    if (e.d > 0) a[r][e.d - 1] += 2.0 * t;
    if (e.f > 0) a[r][e.f - 1] += lambda;
    a[r][n] = lambda * spec.d;
  }

  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    if (std::abs(a[col][col]) < 1e-300)
      throw SingularSystemError("ladder system singular");
    for (int r = col + 1; r < n; ++r) {
      double factor = a[r][col] / a[col][col];
      for (int cc = col; cc <= n; ++cc) a[r][cc] -= factor * a[col][cc];
    }
  }
  std::vector<double> F(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double v = a[r][n];
    for (int cc = r + 1; cc < n; ++cc) v -= a[r][cc] * F[cc];
    F[r] = v / a[r][r];
  }

  LadderSystemSolution sol;
  sol.indirect_flows = F;
  sol.total_indirect = 0.0;
  for (double x : F) sol.total_indirect += x;
  sol.total_vertical_flow = 4.0 * sol.total_indirect;

  // Symmetric one-level-deviation structure: host i sends w_i one rung down
  // and u_i one rung up; variable index is min of the two mirror positions.
  int H = spec.H;
  auto var = [&](int idx) { return F[idx - 1]; };
  std::vector<double> up(H + 2, 0.0), down(H + 2, 0.0);  // 1-based, padded
  for (int g = 1; g <= H - 1; ++g) {
    down[g] = var(std::min(2 * g - 1, 2 * (H - g)));
    up[g + 1] = var(std::min(2 * g, 2 * (H - g) - 1));
  }
  sol.horizontal_flows.resize(H);
  for (int i = 1; i <= H; ++i)
    sol.horizontal_flows[i - 1] = spec.d - up[i] - down[i] + down[i - 1] + up[i + 1];
  sol.vertical_flows_per_side.resize(H - 1);
  for (int g = 1; g <= H - 1; ++g)
    sol.vertical_flows_per_side[g - 1] = down[g] + up[g + 1];
  return sol;
}

LadderPoaBound ladder_poa_bound(int H, double p) {
  if (H < 2 || p < 1.0) throw InvalidArgumentError("invalid ladder bound arguments");
  return {1.0 + 2.0 * (H - 1) / (3.0 * H) * p, 1.0 + 2.0 / 3.0 * p};
}

}  // namespace anarchy
