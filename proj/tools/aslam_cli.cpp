// aslam: build caches, solve, evaluate, sweep and verify.
//
// Exit codes: 0 success, 1 unexpected error, 2 configuration error,
// 3 cache or policy-file error, 4 verification failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "aslam/cache.hpp"
#include "aslam/config.hpp"
#include "aslam/evaluation.hpp"
#include "aslam/parallel.hpp"
#include "report.hpp"
#include "verify.hpp"

namespace fs = std::filesystem;
using namespace aslam;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kCache = 3, kVerify = 4 };

struct Common {
  std::string config_path;
  int jobs = -1;
  std::optional<std::uint64_t> seed;
  std::string out;
};

RunConfig load(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? default_run_config() : load_run_config(c.config_path);
  if (c.seed) {
    cfg.seed = cfg.sweep.seed = *c.seed;
    cfg.provenance["evaluation.seed"] = Provenance::config;
  }
  if (!c.out.empty()) {
    cfg.output_dir = c.out;
  } else if (const char* env = std::getenv("ASLAM_OUT_DIR"); env && *env) {
    cfg.output_dir = env;
  }
  if (c.jobs >= 0) cfg.jobs = c.jobs;
  set_worker_count(cfg.jobs);
  fs::create_directories(cfg.output_dir);
  cli::write_text(cfg.output_dir / "config.txt", "# aslam " ASLAM_VERSION " config_hash=" + hex64(cfg.hash()) +
                                                     "\n" + cfg.echo(true));
  return cfg;
}

std::string policy_stem(const RunConfig& cfg) {
  return "policy-" + std::string(to_string(cfg.cost.kind)) + "-lambda" + cli::num(cfg.cost.lambda);
}

fs::path cache_path(const RunConfig& cfg) { return cfg.output_dir / "cache" / model_cache_name(cfg.model_hash()); }

ModelCache build_model(const RunConfig& cfg, const KnownPoseProblem& problem, const SimplexGrid& grid) {
  ModelCache c;
  c.model_hash = cfg.model_hash();
  c.pose_kernel = problem.pose_kernel();
  c.likelihood = problem.likelihood();
  c.atoms = grid.atoms();
  c.denominator = grid.denominator();
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (Level l : grid.levels(i)) c.levels.push_back(l);
  c.eta = build_known_pose_transition(grid, problem.likelihood(), problem.poses().size());
  return c;
}

// The cache must describe the model the config rebuilds.
void check_cache(const ModelCache& c, const KnownPoseProblem& problem, const SimplexGrid& grid) {
  if (c.atoms != grid.atoms() || c.denominator != grid.denominator() || c.levels.size() != grid.size() * grid.atoms() ||
      c.eta.grid_size() != grid.size() || c.eta.inputs() != problem.poses().size() ||
      c.pose_kernel.data() != problem.pose_kernel().data() || c.likelihood.data() != problem.likelihood().data())
    throw CacheError("cache contents do not match the configured model");
}

int cmd_build(const Common& common) {
  const RunConfig cfg = load(common);
  const KnownPoseProblem problem = cfg.make_problem();
  const SimplexGrid grid(problem.map_count(), cfg.problem.quant.denominator, cfg.problem.quant.grid_cap);
  std::cout << "poses " << problem.poses().size() << "\nmap atoms " << problem.map_count() << "\nactions "
            << problem.actions().size() << "\nobservation cells " << problem.partition().size() << "\nbelief grid "
            << grid.size() << "\n";
  const fs::path path = cache_path(cfg);
  if (fs::exists(path)) {
    try {
      check_cache(read_model_cache(path, cfg.model_hash()), problem, grid);
      std::cout << "cache hit " << path.string() << "\n";
      return kOk;
    } catch (const CacheError& e) {
      std::cerr << "rebuilding stale cache: " << e.what() << "\n";
    }
  }
  fs::create_directories(path.parent_path());
  const ModelCache c = build_model(cfg, problem, grid);
  write_model_cache(path, c);
  std::cout << "belief transition nonzeros " << c.eta.nonzeros() << "\ncache written " << path.string() << "\n";
  return kOk;
}

int cmd_solve(const Common& common) {
  const RunConfig cfg = load(common);
  const KnownPoseProblem problem = cfg.make_problem();
  const SimplexGrid grid(problem.map_count(), cfg.problem.quant.denominator, cfg.problem.quant.grid_cap);
  const ModelCache c = read_model_cache(cache_path(cfg), cfg.model_hash());
  check_cache(c, problem, grid);
  const PlannedPolicy planned = solve_policy(problem, grid, c.eta, cfg.cost.kind, cfg.cost.lambda, cfg.solver);
  PolicyFile f;
  f.config_hash = cfg.hash();
  f.model_hash = cfg.model_hash();
  f.version = ASLAM_VERSION;
  f.policy = planned.policy;
  f.value = planned.solution.value;
  f.iterations = planned.solution.residuals.size();
  f.bellman_residual = planned.solution.bellman_residual;
  const fs::path path = cfg.output_dir / (policy_stem(cfg) + ".bin");
  write_policy_file(path, f);
  std::cout << "sweeps " << f.iterations << "\nbellman residual " << f.bellman_residual << "\nconverged "
            << (planned.solution.converged ? "yes" : "no") << "\npolicy written " << path.string() << "\n";
  return planned.solution.converged ? kOk : kOther;
}

int cmd_evaluate(const Common& common) {
  const RunConfig cfg = load(common);
  const KnownPoseProblem problem = cfg.make_problem();
  const SimplexGrid grid(problem.map_count(), cfg.problem.quant.denominator, cfg.problem.quant.grid_cap);
  const std::string stem = policy_stem(cfg);
  const PolicyFile f = read_policy_file(cfg.output_dir / (stem + ".bin"));
  if (f.model_hash != cfg.model_hash() || f.policy.kind != cfg.cost.kind || f.policy.lambda != cfg.cost.lambda ||
      f.policy.poses != problem.poses().size() || f.policy.grid_size != grid.size() ||
      f.policy.actions != problem.actions().size())
    throw CacheError("policy file metadata does not match the configuration");

  const std::vector<double> b0(problem.map_count(), 1.0 / double(problem.map_count()));
  EpisodeOptions eo;
  eo.horizon = cfg.horizon;
  eo.mode = cfg.mode;
  const auto planned = run_trials(problem, grid, tabulated_rule(f.policy, problem, grid), b0, cfg.trials, cfg.seed, eo);
  const auto random =
      run_trials(problem, grid, random_baseline_rule(problem.actions().size()), b0, cfg.trials, cfg.seed, eo);
  const std::string name(to_string(cfg.cost.kind));
  const std::uint64_t h = cfg.hash();
  const std::string tag = stem.substr(std::string("policy-").size());
  cli::write_trial_csv(cfg.output_dir / ("trials-" + tag + ".csv"), h, name, planned);
  cli::write_trial_csv(cfg.output_dir / ("trials-random.csv"), h, "random", random);
  const TrialStats sp = terminal_stats(planned), sr = terminal_stats(random);
  cli::write_summary_csv(cfg.output_dir / ("summary-" + tag + ".csv"), h, {{name, sp}, {"random", sr}});

  nlohmann::ordered_json j;
  j["schema"] = cli::kJsonSchema;
  j["version"] = ASLAM_VERSION;
  j["config_hash"] = hex64(h);
  j["policy"] = name;
  j["lambda"] = cfg.cost.lambda;
  for (const auto& [key, s] : {std::pair{name, sp}, std::pair{std::string("random"), sr}}) {
    j[key] = {{"terminal_mean_msee", s.terminal_mean}, {"q95", s.q95},           {"q90", s.q90},
              {"cvar90", s.cvar90},                    {"terminal_effort", s.terminal_effort}};
  }
  cli::write_text(cfg.output_dir / ("summary-" + tag + ".json"), j.dump(2) + "\n");
  std::cout << name << ": terminal MSEE " << sp.terminal_mean << ", q95 " << sp.q95 << ", CVaR90 " << sp.cvar90
            << ", effort " << sp.terminal_effort << "\nrandom: terminal MSEE " << sr.terminal_mean << ", q95 "
            << sr.q95 << ", CVaR90 " << sr.cvar90 << ", effort " << sr.terminal_effort << "\n";
  return kOk;
}

int cmd_sweep(const Common& common) {
  const RunConfig cfg = load(common);
  const SweepResult result = lambda_sweep(cfg.problem, cfg.maps, cfg.sweep);
  cli::write_sweep_outputs(cfg.output_dir, cfg.hash(), result);
  std::cout << result.rows.size() << " sweep rows written to " << cfg.output_dir.string() << "\n";
  for (const auto& g : result.gaps)
    std::cout << "M=" << g.denominator << " sigma_r=" << g.sigma_r << " sigma_phi=" << g.sigma_phi
              << " CVaR90 gap (H - W) " << g.gap << "\n";
  return kOk;
}

int cmd_verify(const Common& common, bool inject) {
  const RunConfig cfg = load(common);
  cli::VerifyOptions opts;
  opts.seed = cfg.seed;
  opts.inject_fault = inject;
  bool ok = true;
  for (const auto& r : cli::run_verification(cfg, opts)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    ok = ok && r.passed;
  }
  return ok ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-approximation planner for active SLAM with belief costs"};
  app.set_version_flag("--version", ASLAM_VERSION);
  app.require_subcommand(1);
  Common common;
  bool inject = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--jobs", common.jobs, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", common.seed, "master seed");
    sub->add_option("--out", common.out, "output directory (overrides ASLAM_OUT_DIR and output.dir)");
  };
  auto* build = app.add_subcommand("build", "build kernels, belief grid and belief transition into the cache");
  auto* solve = app.add_subcommand("solve", "value iteration for cost.kind and cost.lambda");
  auto* evaluate = app.add_subcommand("evaluate", "Monte Carlo evaluation of the solved policy and random baseline");
  auto* sweep = app.add_subcommand("sweep", "lambda and noise sweep for both costs");
  auto* verify = app.add_subcommand("verify", "run the oracle checks");
  for (auto* sub : {build, solve, evaluate, sweep, verify}) add_common(sub);
  verify->add_flag("--inject-fault", inject, "corrupt one observation row to exercise the checker");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    if (*build) return cmd_build(common);
    if (*solve) return cmd_solve(common);
    if (*evaluate) return cmd_evaluate(common);
    if (*sweep) return cmd_sweep(common);
    if (*verify) return cmd_verify(common, inject);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const GridTooLarge& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const CacheError& e) {
    std::cerr << "cache error: " << e.what() << "\n";
    return kCache;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
