// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aslam/config.hpp"
#include "aslam/evaluation.hpp"
#include "aslam/metrics.hpp"
#include "oracles.hpp"

using namespace aslam;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path source_path(const char* rel) { return fs::path(ASLAM_SOURCE_DIR) / rel; }

Outcome grid_cardinality() {
  const auto t0 = Clock::now();
  const SimplexGrid g5(16, 5), g6(16, 6);
  const double t = seconds_since(t0);
  // Stars and bars: C(m + M - 1, M).
  const auto want5 = static_cast<std::size_t>(oracle::binomial(20, 5));
  const auto want6 = static_cast<std::size_t>(oracle::binomial(21, 6));
  const bool ok = g5.size() == 15504 && g6.size() == 54264 && want5 == 15504 && want6 == 54264 && t < 1.0;
  return {ok, fmt("|B(5)| = %zu, |B(6)| = %zu (stars and bars %zu, %zu), built in %.3f s", g5.size(), g6.size(),
                  want5, want6, t)};
}

// Atoms are random points of the unit square; the belief is first moved to
// the state lattice (covering radius < 1/n) and then compared against every
// grid belief on the lattice representatives with the exact transport LP.
Outcome quantization_bound() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 2 + trial % 5;
    const unsigned M = 1 + static_cast<unsigned>(trial / 5 % 5);
    const std::size_t n = std::size_t{1} << (trial / 25 % 4);
    const auto lattice = build_state_lattice(Box::square(0.5), n);
    std::vector<std::vector<double>> pts;
    std::vector<std::vector<double>> reps;
    for (int k = 0; k < m; ++k) {
      const Vec2 p{u(gen) - 0.5, u(gen) - 0.5};
      pts.push_back({p.x, p.y});
      const auto r = lattice.space().planar(*lattice.locate(p));
      reps.push_back({r.x, r.y});
    }
    std::vector<std::vector<double>> all = pts;
    all.insert(all.end(), reps.begin(), reps.end());
    const auto d = DistanceMatrix::euclidean(all);
    const double diameter = DistanceMatrix::euclidean(reps).diameter();
    const auto b = trial % 3 ? oracle::random_simplex(gen, m) : oracle::random_sparse_simplex(gen, m);
    std::vector<double> mu(2 * m, 0.0), nu(2 * m, 0.0);
    std::copy(b.begin(), b.end(), mu.begin());
    const SimplexGrid grid(static_cast<std::size_t>(m), M);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto g = grid.belief(i);
      std::copy(g.begin(), g.end(), nu.begin() + m);
      best = std::min(best, wasserstein1(mu, nu, d));
    }
    const double bound = quantization_error_bound(static_cast<double>(n), M, static_cast<std::size_t>(m), diameter);
    if (best > bound + 1e-12) ++violations;
    min_slack = std::min(min_slack, bound - best);
  }
  const double t = seconds_since(t0);
  return {violations == 0 && t < 60.0,
          fmt("%zu violations in 1000 beliefs (m 2..6, M 1..5, n 1..8), min slack %.3g, %.1f s", violations,
              min_slack, t)};
}

struct ThreeMap {
  KnownPoseProblem problem = make_three_map_instance();
};

Outcome prior_averaged_cost() {
  const auto t0 = Clock::now();
  const ThreeMap tm;
  const SimplexGrid grid(3, 4);
  const auto eta = build_known_pose_transition(grid, tm.problem.likelihood(), tm.problem.poses().size());
  SolveOptions so;
  so.beta = 0.9;
  const auto planned = solve_policy(tm.problem, grid, eta, ExplorationKind::rao, 200.0, so);
  const std::vector<double> prior(3, 1.0 / 3.0);
  const auto r = prior_averaged_check(tm.problem, grid, tabulated_rule(planned.policy, tm.problem, grid), prior, 5000,
                                    40, 0.9, 17);
  // Independent tolerance from the pieces.
  const double se = std::hypot(r.se_pa, r.se_beta);
  const double tail = std::pow(0.9, 40) * tm.problem.map_space().distances().diameter() / (1.0 - 0.9);
  const double gap = std::abs(r.j_pa - r.j_beta);
  const double t = seconds_since(t0);
  return {gap <= 3.0 * se + tail && t < 120.0,
          fmt("J_pa %.5f, J_beta %.5f, |gap| %.5f <= 3 SE %.5f + tail %.5f, %.1f s", r.j_pa, r.j_beta, gap, 3.0 * se,
              tail, t)};
}

Outcome reznik_agreement() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(99);
  std::size_t agree = 0;
  const std::size_t total = 10000;
  for (std::size_t trial = 0; trial < total; ++trial) {
    const int m = 2 + static_cast<int>(trial % 5);
    const int M = 1 + static_cast<int>(trial / 5 % 5);
    const SimplexGrid grid(static_cast<std::size_t>(m), static_cast<unsigned>(M));
    const auto b = trial % 4 ? oracle::random_simplex(gen, m) : oracle::random_sparse_simplex(gen, m);
    const auto best = oracle::nearest_grid_point(b, M);
    const auto lv = grid.levels(reznik_quantize(b, grid));
    if (std::equal(best.begin(), best.end(), lv.begin(), lv.end())) ++agree;
  }
  const double t = seconds_since(t0);
  return {agree == total && t < 60.0, fmt("%zu / %zu identical to brute force, %.1f s", agree, total, t)};
}

Outcome contraction() {
  const auto t0 = Clock::now();
  const auto cfg = load_run_config(source_path("configs/paper-m5.cfg"));
  const auto problem = cfg.make_problem();
  const SimplexGrid grid(problem.map_count(), cfg.problem.quant.denominator);
  const auto eta = build_known_pose_transition(grid, problem.likelihood(), problem.poses().size());
  bool ok = true;
  std::string detail = fmt("%zu states, beta %.2f;", problem.poses().size() * grid.size(), cfg.solver.beta);
  for (auto kind : {ExplorationKind::rao, ExplorationKind::shannon}) {
    const auto p = solve_policy(problem, grid, eta, kind, cfg.cost.lambda, cfg.solver);
    const auto& r = p.solution.residuals;
    double worst = 0.0;
    for (std::size_t k = 1; k < r.size(); ++k)
      if (r[k - 1] > 0.0) worst = std::max(worst, r[k] / r[k - 1]);
    ok = ok && p.solution.converged && worst <= cfg.solver.beta + 1e-9 && p.solution.bellman_residual < 1e-6;
    detail += fmt(" %s: %zu sweeps, max ratio %.4f, residual %.2e;", std::string(to_string(kind)).c_str(), r.size(),
                  worst, p.solution.bellman_residual);
  }
  return {ok, detail + fmt(" %.1f s", seconds_since(t0))};
}

Outcome resolution_trend() {
  const auto t0 = Clock::now();
  const ThreeMap tm;
  const double beta = 0.9, lambda = 200.0;
  const std::size_t trials = 5000, horizon = 150;
  const ExplorationCost rao(ExplorationKind::rao, tm.problem.map_space().distances());
  const std::vector<double> b0(3, 1.0 / 3.0);
  SolveOptions so;
  so.beta = beta;
  so.tol = 1e-9;
  std::vector<PolicyValue> values;
  for (unsigned M : {2u, 4u, 8u}) {
    const SimplexGrid grid(3, M);
    const auto eta = build_known_pose_transition(grid, tm.problem.likelihood(), tm.problem.poses().size());
    const auto planned = solve_policy(tm.problem, grid, eta, ExplorationKind::rao, lambda, so);
    values.push_back(policy_value(tm.problem, grid, tabulated_rule(planned.policy, tm.problem, grid), rao, lambda,
                                  beta, b0, trials, horizon, 31));
  }
  bool ok = true;
  std::string detail = fmt("V(2) %.4f, V(4) %.4f, V(8) %.4f;", values[0].mean, values[1].mean, values[2].mean);
  for (std::size_t k = 1; k < values.size(); ++k) {
    // Paired differences: every M uses the same trial substreams.
    std::vector<double> diff(trials);
    for (std::size_t i = 0; i < trials; ++i) diff[i] = values[k].samples[i] - values[k - 1].samples[i];
    const double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / trials;
    double ss = 0.0;
    for (double x : diff) ss += (x - mean) * (x - mean);
    const double se = std::sqrt(ss / (trials - 1) / trials);
    ok = ok && mean <= 2.0 * se;
    detail += fmt(" step %zu: diff %+.4f, 2 SE %.4f;", k, mean, 2.0 * se);
  }
  const double tail = std::pow(beta, horizon) * (lambda + 1.0) / (1.0 - beta);
  return {ok, detail + fmt(" truncation tail %.1e, %.1f s", tail, seconds_since(t0))};
}

Outcome cost_agreement() {
  const auto t0 = Clock::now();
  auto cfg = load_run_config(source_path("configs/paper-m5.cfg"));
  KnownPoseProblem problem = cfg.make_problem();
  const SimplexGrid grid(problem.map_count(), cfg.problem.quant.denominator);
  double best = 0.0;
  std::string table;
  for (const auto& noise : cfg.sweep.noise) {
    problem.set_sensor_noise(noise.sigma_r, noise.sigma_phi);
    const auto eta = build_known_pose_transition(grid, problem.likelihood(), problem.poses().size());
    const auto a = solve_policy(problem, grid, eta, ExplorationKind::rao, cfg.cost.lambda, cfg.solver);
    const auto b = solve_policy(problem, grid, eta, ExplorationKind::shannon, cfg.cost.lambda, cfg.solver);
    const double agreement = policy_agreement(a.policy, b.policy);
    best = std::max(best, agreement);
    table += fmt(" (%.2f,%.1f) %.3f", noise.sigma_r, noise.sigma_phi, agreement);
  }
  return {best >= 0.99, fmt("lambda %g, best %.3f (need >= 0.99); all settings (sigma_r,sigma_phi):%s; %.1f s",
                            cfg.cost.lambda, best, table.c_str(), seconds_since(t0))};
}

Outcome figures_statement() {
  return {true,
          "informational: the published CVaR gaps and the 8-of-12 tally depend on unpublished geometry, discount "
          "and prior; `aslam sweep` emits the same tables for a qualitative rerun, no numeric tolerance is claimed"};
}

std::vector<char> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Relative path -> bytes for every regular file under dir.
std::vector<std::pair<std::string, std::vector<char>>> snapshot(const fs::path& dir) {
  std::vector<std::pair<std::string, std::vector<char>>> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.emplace_back(fs::relative(e.path(), dir).string(), slurp(e.path()));
  std::sort(files.begin(), files.end());
  return files;
}

Outcome determinism() {
  const auto t0 = Clock::now();
  const fs::path root = fs::path(ASLAM_BINARY_DIR) / "acceptance-determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  struct Run {
    const char* config;
    const char* commands;
  };
  const std::vector<Run> runs{{"configs/tiny.cfg", "build solve evaluate sweep"},
                              {"configs/paper-m5.cfg", "build solve evaluate"}};
  std::size_t files = 0;
  std::string failure;
  for (const auto& run : runs) {
    std::vector<fs::path> outs;
    for (const char* jobs : {"1", "4", "1"}) {
      const fs::path out = root / fmt("%s-jobs%s-%zu", fs::path(run.config).stem().c_str(), jobs, outs.size());
      std::istringstream cmds(run.commands);
      for (std::string cmd; cmds >> cmd;) {
        const std::string line = fmt("\"%s\" %s --config \"%s\" --jobs %s --out \"%s\" > \"%s\" 2>&1", ASLAM_CLI,
                                     cmd.c_str(), source_path(run.config).c_str(), jobs, out.c_str(),
                                     (root / "log.txt").c_str());
        if (std::system(line.c_str()) != 0) failure += " '" + cmd + "' failed on " + run.config + ";";
      }
      outs.push_back(out);
    }
    const auto ref = snapshot(outs[0]);
    files += ref.size();
    for (std::size_t k = 1; k < outs.size(); ++k) {
      const auto other = snapshot(outs[k]);
      if (other.size() != ref.size()) failure += fmt(" file sets differ for %s;", run.config);
      for (std::size_t i = 0; i < std::min(ref.size(), other.size()); ++i)
        if (ref[i] != other[i]) failure += " " + ref[i].first + " differs;";
    }
  }
  const bool ok = failure.empty() && files > 0;
  return {ok, fmt("%zu output files compared across jobs 1, 4 and a rerun%s, %.1f s", files,
                  failure.empty() ? "" : (":" + failure).c_str(), seconds_since(t0))};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"belief-grid-cardinality", grid_cardinality},
      {"quantization-error-bound", quantization_bound},
      {"prior-averaged-cost", prior_averaged_cost},
      {"reznik-brute-force", reznik_agreement},
      {"value-iteration-contraction", contraction},
      {"resolution-trend", resolution_trend},
      {"cost-agreement-m5", cost_agreement},
      {"figure-values-not-reproduced", figures_statement},
      {"determinism", determinism},
  };
  // Optional arguments select criteria by number.
  std::vector<bool> selected(criteria.size(), argc <= 1);
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k >= 1 && k <= static_cast<int>(criteria.size())) selected[static_cast<std::size_t>(k - 1)] = true;
  }
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (!selected[k]) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.passed;
    std::printf("%s %zu %s: %s\n", o.passed ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
