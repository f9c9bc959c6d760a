// anarchy: reproducible experiment runner for selfish-routing studies.
//
// Subcommands: generate, solve, poa, sweep, closed-form. Every run writes its
// artifacts to <out-root>/<command>/<label-or-timestamp>/ together with a
// manifest that echoes the configuration and digests of all inputs/outputs.
//
// Exit codes: 0 success, 2 usage error, 3 solver non-convergence (partial
// results are still written), 4 I/O error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "anarchy/closed_form.hpp"
#include "anarchy/errors.hpp"
#include "anarchy/metrics.hpp"
#include "anarchy/serialize.hpp"
#include "anarchy/solvers.hpp"
#include "anarchy/topologies.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace anarchy;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitIo = 4;
constexpr int kArtifactVersion = 1;

struct RunContext {
  fs::path dir;
  std::string command;
  std::string label;  // empty -> timestamped directory, manifest gets a clock time
  json config = json::object();
  json inputs = json::object();
  json outputs = json::object();
};

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", std::gmtime(&t));
  return buf;
}

RunContext open_run(const std::string& command, const std::string& label) {
  const char* env = std::getenv("ANARCHY_LAB_OUT");
  fs::path root = env && *env ? fs::path(env) : fs::path("out");
  RunContext ctx;
  ctx.command = command;
  ctx.label = label;
  ctx.dir = root / command / (label.empty() ? utc_timestamp() : label);
  std::error_code ec;
  fs::create_directories(ctx.dir, ec);
  if (ec) throw ParseError(ctx.dir.string(), 0, "cannot create output directory");
  return ctx;
}

void write_text(RunContext& ctx, const std::string& name, const std::string& content) {
  auto path = ctx.dir / name;
  std::ofstream out(path);
  if (!out) throw ParseError(path.string(), 0, "cannot open file for writing");
  out << content;
  out.close();
  ctx.outputs[name] = file_digest(path.string());
}

void note_input(RunContext& ctx, const std::string& path) {
  ctx.inputs[path] = file_digest(path);
}

void write_manifest(RunContext& ctx) {
  json m;
  m["artifact_version"] = kArtifactVersion;
  m["command"] = ctx.command;
  m["config"] = ctx.config;
  m["inputs"] = ctx.inputs;
  m["outputs"] = ctx.outputs;
  // A wall-clock stamp would break byte-identical reruns, so labeled runs
  // record the label instead.
  m["timestamp"] = ctx.label.empty() ? utc_timestamp() : "label:" + ctx.label;
  auto path = ctx.dir / "manifest.json";
  std::ofstream out(path);
  if (!out) throw ParseError(path.string(), 0, "cannot open file for writing");
  out << m.dump(2) << "\n";
}

void require_readable(const std::string& path) {
  if (!fs::exists(path))
    throw InvalidArgumentError("input file does not exist: " + path);
}

struct SolverFlags {
  int max_iters = 100000;
  double grad_tol = 1e-8;
  double br_tol = 1e-10;
  std::string step_rule = "exact";
  unsigned seed = 0;
  bool randomize_order = false;

  SolverConfig to_config() const {
    SolverConfig cfg;
    cfg.max_iters = max_iters;
    cfg.grad_tolerance = grad_tol;
    cfg.br_sweep_tolerance = br_tol;
    cfg.step_rule = step_rule == "diminishing" ? SolverConfig::StepRule::Diminishing
                                               : SolverConfig::StepRule::ExactLineSearch;
    cfg.seed = seed;
    cfg.randomize_best_response_order = randomize_order;
    return cfg;
  }
  json to_json() const {
    return {{"max_iters", max_iters},     {"grad_tol", grad_tol},
            {"br_tol", br_tol},           {"step_rule", step_rule},
            {"seed", seed},               {"randomize_order", randomize_order}};
  }
};

void add_solver_flags(CLI::App* app, SolverFlags& f) {
  app->add_option("--max-iters", f.max_iters, "Iteration / sweep cap");
  app->add_option("--grad-tol", f.grad_tol, "Relative marginal-gap tolerance");
  app->add_option("--br-tol", f.br_tol, "Best-response sweep-change tolerance");
  app->add_option("--step-rule", f.step_rule, "exact | diminishing")
      ->check(CLI::IsMember({"exact", "diminishing"}));
  app->add_option("--seed", f.seed, "Seed for any randomized ordering");
  app->add_flag("--randomize-order", f.randomize_order,
                "Shuffle the best-response host order");
}

std::vector<std::size_t> parse_k_list(const std::string& arg) {
  std::vector<std::size_t> ks;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      long v = std::stol(item);
      if (v < 1) throw std::out_of_range("k");
      ks.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw InvalidArgumentError("--k-list entries must be positive integers, got '" +
                                 item + "'");
    }
  }
  if (ks.empty()) throw InvalidArgumentError("--k-list must not be empty");
  return ks;
}

int cmd_generate(const std::string& kind, const json& params, const Network& net,
                 const std::string& label) {
  auto ctx = open_run("generate", label);
  ctx.config = {{"kind", kind}, {"params", params}};
  write_text(ctx, "topology.json", network_to_json(net).dump(2) + "\n");
  write_manifest(ctx);
  std::cout << (ctx.dir / "topology.json").string() << "\n";
  return 0;
}

int cmd_generate_abilene(const AbileneConfig& cfg, const std::string& label) {
  require_readable(cfg.topology_path);
  require_readable(cfg.traffic_matrix_path);
  auto ctx = open_run("generate", label);
  ctx.config = {{"kind", "abilene"},
                {"params",
                 {{"topology", cfg.topology_path},
                  {"matrix", cfg.traffic_matrix_path},
                  {"delta_scale", cfg.delta_scale},
                  {"demand_scale", cfg.demand_scale},
                  {"hosts_per_pop", cfg.hosts_per_pop}}}};
  note_input(ctx, cfg.topology_path);
  note_input(ctx, cfg.traffic_matrix_path);

  AbileneLoadInfo info;
  Network net = load_abilene(cfg, &info);
  ctx.config["calibration"] = {{"effective_delta_scale", info.effective_delta_scale},
                               {"effective_demand_scale", info.effective_demand_scale},
                               {"total_demand", info.total_demand},
                               {"matrix_symmetrized", info.matrix_symmetrized}};
  write_text(ctx, "topology.json", network_to_json(net).dump(2) + "\n");
  write_manifest(ctx);
  std::cout << (ctx.dir / "topology.json").string() << "\n";
  return 0;
}

int cmd_solve(const std::string& topology, const std::string& which,
              std::optional<std::size_t> k, const SolverFlags& flags,
              const std::string& label) {
  require_readable(topology);
  auto ctx = open_run("solve", label);
  ctx.config = {{"topology", topology},
                {"which", which},
                {"k", k ? json(*k) : json(nullptr)},
                {"solver", flags.to_json()}};
  note_input(ctx, topology);

  Network net = load_network(topology);
  auto universe = PathUniverse::build(net, k);
  SolverConfig cfg = flags.to_config();
  EquilibriumResult result =
      which == "opt-star" ? solve_social_optimum(universe, SocialObjective::EndHost, cfg)
      : which == "opt-hash"
          ? solve_social_optimum(universe, SocialObjective::Operator, cfg)
      : which == "li" ? solve_li_equilibrium(universe, cfg)
                      : solve_pi_equilibrium(universe, cfg);

  json doc = result_to_json(result);
  doc["costs"] = {{"endhost", endhost_cost(result.pattern)},
                  {"operator", operator_cost(result.pattern)}};
  write_text(ctx, "result.json", doc.dump(2) + "\n");
  write_manifest(ctx);

  std::cout << "status=" << doc["status"].get<std::string>()
            << " iterations=" << result.iterations << " residual=" << result.residual
            << "\n";
  return result.status == SolveStatus::Converged ? 0 : kExitNotConverged;
}

int cmd_poa(const std::string& topology, std::optional<std::size_t> k,
            const SolverFlags& flags, const std::string& label) {
  require_readable(topology);
  auto ctx = open_run("poa", label);
  ctx.config = {{"topology", topology},
                {"k", k ? json(*k) : json(nullptr)},
                {"solver", flags.to_json()}};
  note_input(ctx, topology);

  Network net = load_network(topology);
  auto universe = PathUniverse::build(net, k);
  auto out = compute_poa(universe, flags.to_config(), fs::path(topology).stem().string());
  write_text(ctx, "poa.json", poa_report_to_json(out.report).dump(2) + "\n");
  write_manifest(ctx);

  const PoAReport& r = out.report;
  std::cout << "poa_star_0=" << r.poa_star_0 << " poa_star_plus=" << r.poa_star_plus
            << " poa_hash_0=" << r.poa_hash_0 << " poa_hash_plus=" << r.poa_hash_plus
            << " voi_star=" << r.voi_star << " voi_hash=" << r.voi_hash << "\n";
  return r.all_converged ? 0 : kExitNotConverged;
}

int cmd_sweep(const std::string& topology, const std::string& k_list, int jobs,
              const SolverFlags& flags, const std::string& label) {
  require_readable(topology);
  auto ks = parse_k_list(k_list);
  auto ctx = open_run("sweep", label);
  ctx.config = {{"topology", topology},
                {"k_list", ks},
                {"jobs", jobs},
                {"solver", flags.to_json()}};
  note_input(ctx, topology);

  // Warm starts chain consecutive k points, so rows are computed in k order
  // regardless of --jobs; the flag is accepted for interface stability.
  Network net = load_network(topology);
  auto entries = run_multipath_sweep(net, ks, flags.to_config());
  write_text(ctx, "sweep.csv", sweep_to_csv(entries));
  json provenance = {{"command", "sweep"}, {"config", ctx.config}};
  write_text(ctx, "provenance.json", provenance.dump(2) + "\n");
  write_manifest(ctx);

  bool ok = true;
  for (const auto& e : entries)
    if (e.solver_error || !e.report.all_converged) ok = false;
  std::cout << (ctx.dir / "sweep.csv").string() << "\n";
  return ok ? 0 : kExitNotConverged;
}

int emit_closed_form(const std::string& variant, const json& params, const json& result,
                     const std::string& label, const std::string& summary) {
  auto ctx = open_run("closed-form", label);
  ctx.config = {{"variant", variant}, {"params", params}};
  json doc = {{"variant", variant}, {"params", params}, {"result", result}};
  write_text(ctx, "closed_form.json", doc.dump(2) + "\n");
  write_manifest(ctx);
  std::cout << summary << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selfish-routing equilibria, optima, and Price-of-Anarchy toolkit"};
  app.require_subcommand(1);
  std::string label;
  app.add_option("--label", label,
                 "Name the output directory (replaces the timestamp; reruns overwrite)");

  // generate
  auto* generate = app.add_subcommand("generate", "Write a topology document");
  generate->require_subcommand(1);
  ParallelLinksSpec par;
  auto* gen_par = generate->add_subcommand("parallel", "Parallel-links network");
  gen_par->add_option("--m", par.m, "Number of constant links")->required();
  gen_par->add_option("--p", par.p, "Cost exponent")->required();
  gen_par->add_option("--d", par.d, "Total demand")->required();
  gen_par->add_option("--K", par.K, "Number of end-hosts")->required();
  LadderSpec lad;
  auto* gen_lad = generate->add_subcommand("ladder", "Ladder network");
  gen_lad->add_option("--H", lad.H, "Number of rungs")->required();
  gen_lad->add_option("--p", lad.p, "Rung cost exponent")->required();
  gen_lad->add_option("--d", lad.d, "Per-rung demand")->required();
  gen_lad->add_option("--t", lad.t, "Rail cost slope")->required();
  AbileneConfig abi;
  auto* gen_abi = generate->add_subcommand(
      "abilene", "Backbone network from a PoP topology and traffic matrix");
  gen_abi->add_option("--topology", abi.topology_path, "PoP topology file")->required();
  gen_abi->add_option("--matrix", abi.traffic_matrix_path, "Traffic matrix CSV")
      ->required();
  gen_abi->add_option("--delta-scale", abi.delta_scale,
                      "Propagation units per km (0 = auto-calibrate)");
  gen_abi->add_option("--demand-scale", abi.demand_scale,
                      "Demand multiplier (0 = normalize total to 10)");
  gen_abi->add_option("--hosts-per-pop", abi.hosts_per_pop, "End-hosts per PoP");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one optimum or equilibrium");
  std::string solve_topology, solve_which;
  std::optional<std::size_t> solve_k;
  SolverFlags solve_flags;
  solve->add_option("topology", solve_topology, "Topology file")->required();
  solve->add_option("--which", solve_which, "opt-star | opt-hash | li | pi")
      ->required()
      ->check(CLI::IsMember({"opt-star", "opt-hash", "li", "pi"}));
  solve->add_option("--k", solve_k, "Limit each OD pair to its k best paths");
  add_solver_flags(solve, solve_flags);

  // poa
  auto* poa = app.add_subcommand("poa", "All four PoA variants and both VoIs");
  std::string poa_topology;
  std::optional<std::size_t> poa_k;
  SolverFlags poa_flags;
  poa->add_option("topology", poa_topology, "Topology file")->required();
  poa->add_option("--k", poa_k, "Limit each OD pair to its k best paths");
  add_solver_flags(poa, poa_flags);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "PoA/VoI over a list of path budgets k");
  std::string sweep_topology, sweep_k_list;
  int sweep_jobs = 1;
  SolverFlags sweep_flags;
  sweep->add_option("topology", sweep_topology, "Topology file")->required();
  sweep->add_option("--k-list", sweep_k_list, "Comma-separated k values")->required();
  sweep->add_option("--jobs", sweep_jobs, "Worker cap (rows assemble in k order)");
  add_solver_flags(sweep, sweep_flags);

  // closed-form
  auto* cf = app.add_subcommand("closed-form", "Evaluate closed-form expressions");
  cf->require_subcommand(1);
  ParallelLinksSpec cf_par;
  bool cf_infinite = false;
  auto* cf_table = cf->add_subcommand("parallel-table", "Parallel-links PoA table");
  cf_table->add_option("--m", cf_par.m)->required();
  cf_table->add_option("--p", cf_par.p)->required();
  cf_table->add_option("--d", cf_par.d)->required();
  cf_table->add_option("--K", cf_par.K)->required();
  cf_table->add_flag("--infinite-hosts", cf_infinite, "Take the K -> infinity limit");
  LadderSpec cf_lad{.H = 2};
  auto* cf_h2 = cf->add_subcommand("ladder-h2", "Two-rung ladder PI closed form");
  cf_h2->add_option("--p", cf_lad.p)->required();
  cf_h2->add_option("--d", cf_lad.d)->required();
  cf_h2->add_option("--t", cf_lad.t)->required();
  double cf_worst_p = 1.0;
  auto* cf_worst = cf->add_subcommand("ladder-worst", "Two-rung worst-case ratios");
  cf_worst->add_option("--p", cf_worst_p)->required();
  int cf_bound_H = 2;
  double cf_bound_p = 1.0;
  auto* cf_bound = cf->add_subcommand("ladder-bound", "PoA#+ bound for H rungs");
  cf_bound->add_option("--H", cf_bound_H)->required();
  cf_bound->add_option("--p", cf_bound_p)->required();
  LadderSpec cf_sys;
  auto* cf_system = cf->add_subcommand("ladder-system", "One-level-deviation flows");
  cf_system->add_option("--H", cf_sys.H)->required();
  cf_system->add_option("--p", cf_sys.p)->required();
  cf_system->add_option("--d", cf_sys.d)->required();
  cf_system->add_option("--t", cf_sys.t)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen_par->parsed())
      return cmd_generate("parallel",
                          {{"m", par.m}, {"p", par.p}, {"d", par.d}, {"K", par.K}},
                          gen_parallel_links(par), label);
    if (gen_lad->parsed())
      return cmd_generate("ladder",
                          {{"H", lad.H}, {"p", lad.p}, {"d", lad.d}, {"t", lad.t}},
                          gen_ladder(lad), label);
    if (gen_abi->parsed()) return cmd_generate_abilene(abi, label);
    if (solve->parsed())
      return cmd_solve(solve_topology, solve_which, solve_k, solve_flags, label);
    if (poa->parsed()) return cmd_poa(poa_topology, poa_k, poa_flags, label);
    if (sweep->parsed())
      return cmd_sweep(sweep_topology, sweep_k_list, sweep_jobs, sweep_flags, label);
    if (cf_table->parsed()) {
      auto t = parallel_poa_table(cf_par, cf_infinite);
      json result = {{"poa_star_0", t.poa_star_0},
                     {"poa_star_plus", t.poa_star_plus},
                     {"poa_hash_0", t.poa_hash_0},
                     {"poa_hash_plus", t.poa_hash_plus}};
      std::ostringstream s;
      s << "poa_star_0=" << t.poa_star_0 << " poa_star_plus=" << t.poa_star_plus
        << " poa_hash_0=" << t.poa_hash_0 << " poa_hash_plus=" << t.poa_hash_plus;
      return emit_closed_form("parallel-table",
                              {{"m", cf_par.m},
                               {"p", cf_par.p},
                               {"d", cf_par.d},
                               {"K", cf_par.K},
                               {"infinite_hosts", cf_infinite}},
                              result, label, s.str());
    }
    if (cf_h2->parsed()) {
      auto r = ladder_pi_h2(cf_lad);
      json result = {{"indirect_flow", r.indirect_flow},
                     {"poa_star_plus", r.poa_star_plus},
                     {"poa_hash_plus", r.poa_hash_plus}};
      std::ostringstream s;
      s << "F1=" << r.indirect_flow << " poa_star_plus=" << r.poa_star_plus
        << " poa_hash_plus=" << r.poa_hash_plus;
      return emit_closed_form(
          "ladder-h2", {{"p", cf_lad.p}, {"d", cf_lad.d}, {"t", cf_lad.t}}, result,
          label, s.str());
    }
    if (cf_worst->parsed()) {
      auto w = ladder_pi_h2_worst_case(cf_worst_p);
      json result = {{"poa_star_plus", w.poa_star_plus},
                     {"poa_hash_plus", w.poa_hash_plus}};
      std::ostringstream s;
      s << "poa_star_plus=" << w.poa_star_plus << " poa_hash_plus=" << w.poa_hash_plus;
      return emit_closed_form("ladder-worst", {{"p", cf_worst_p}}, result, label, s.str());
    }
    if (cf_bound->parsed()) {
      auto b = ladder_poa_bound(cf_bound_H, cf_bound_p);
      json result = {{"bound_H", b.bound_H}, {"bound_inf", b.bound_inf}};
      std::ostringstream s;
      s << b.bound_H;
      return emit_closed_form("ladder-bound", {{"H", cf_bound_H}, {"p", cf_bound_p}},
                              result, label, s.str());
    }
    if (cf_system->parsed()) {
      auto sol = ladder_solve_system(cf_sys);
      json result = {{"indirect_flows", sol.indirect_flows},
                     {"total_indirect", sol.total_indirect},
                     {"total_vertical_flow", sol.total_vertical_flow},
                     {"horizontal_flows", sol.horizontal_flows},
                     {"vertical_flows_per_side", sol.vertical_flows_per_side}};
      std::ostringstream s;
      s << "F_V=" << sol.total_indirect << " f_V=" << sol.total_vertical_flow;
      return emit_closed_form("ladder-system",
                              {{"H", cf_sys.H},
                               {"p", cf_sys.p},
                               {"d", cf_sys.d},
                               {"t", cf_sys.t}},
                              result, label, s.str());
    }
  } catch (const InvalidArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NoPathError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
