#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "aslam/evaluation.hpp"
#include "aslam/kernels.hpp"
#include "aslam/metrics.hpp"

namespace aslam::cli {

namespace {

std::vector<double> random_simplex(std::mt19937_64& gen, std::size_t m) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> b(m);
  for (auto& x : b) x = e(gen);
  const double s = std::accumulate(b.begin(), b.end(), 0.0);
  for (auto& x : b) x /= s;
  return b;
}

CheckResult check_ot(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + trial % 7;
    std::vector<double> x(m);
    for (auto& v : x) v = u(gen);
    std::sort(x.begin(), x.end());
    std::vector<std::vector<double>> pts;
    for (double v : x) pts.push_back({v});
    const auto d = DistanceMatrix::euclidean(pts);
    const auto mu = random_simplex(gen, m), nu = random_simplex(gen, m);
    double f = 0.0, g = 0.0, closed = 0.0;
    for (std::size_t k = 0; k + 1 < m; ++k) {
      f += mu[k];
      g += nu[k];
      closed += std::abs(f - g) * (x[k + 1] - x[k]);
    }
    worst = std::max(worst, std::abs(wasserstein1(mu, nu, d) - closed));
  }
  std::ostringstream s;
  s << "200 line instances, max |LP - closed form| = " << worst;
  return {"ot-closed-form", worst < 1e-10, s.str()};
}

CheckResult check_reznik(std::mt19937_64& gen) {
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t m = 2 + trial % 5;
    const unsigned M = 1 + static_cast<unsigned>(trial / 5 % 5);
    const SimplexGrid grid(m, M);
    const auto b = random_simplex(gen, m);
    auto dist = [&](std::size_t i) {
      double s = 0.0;
      const auto lv = grid.levels(i);
      for (std::size_t k = 0; k < m; ++k) s += std::pow(b[k] - lv[k] / double(M), 2);
      return s;
    };
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) best = std::min(best, dist(i));
    if (dist(reznik_quantize(b, grid)) > best + 1e-12) ++mismatches;
  }
  return {"reznik-brute-force", mismatches == 0, std::to_string(mismatches) + " of 2000 not nearest"};
}

CheckResult check_error_bound(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t violations = 0;
  double slack = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 2 + trial % 5;
    const unsigned M = 1 + static_cast<unsigned>(trial % 4);
    std::vector<std::vector<double>> pts(m);
    for (auto& p : pts) p = {u(gen), u(gen)};
    const auto d = DistanceMatrix::euclidean(pts);
    const SimplexGrid grid(m, M);
    const auto b = random_simplex(gen, m);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) best = std::min(best, wasserstein1(b, grid.belief(i), d));
    const double bound = quantization_error_bound(std::numeric_limits<double>::infinity(), M, m, d.diameter());
    if (best > bound + 1e-12) ++violations;
    slack = std::min(slack, bound - best);
  }
  std::ostringstream s;
  s << violations << " violations in 300 beliefs, min slack " << slack;
  return {"quantization-error-bound", violations == 0, s.str()};
}

CheckResult check_prior_average(std::uint64_t seed) {
  const KnownPoseProblem problem = make_three_map_instance();
  const SimplexGrid grid(problem.map_count(), problem.config().quant.denominator);
  const auto eta = build_known_pose_transition(grid, problem.likelihood(), problem.poses().size());
  SolveOptions so;
  so.beta = 0.9;
  const PlannedPolicy planned = solve_policy(problem, grid, eta, ExplorationKind::rao, 200.0, so);
  const std::vector<double> prior(problem.map_count(), 1.0 / double(problem.map_count()));
  const auto r = prior_averaged_check(problem, grid, tabulated_rule(planned.policy, problem, grid), prior, 1000, 40, 0.9,
                                    seed);
  std::ostringstream s;
  s << "J_pa " << r.j_pa << " J_beta " << r.j_beta << " gap " << r.gap << " allowed " << r.allowed;
  return {"prior-averaged-cost", r.passed, s.str()};
}

CheckResult check_rows(const KnownPoseProblem& problem, const BeliefTransition& eta, bool inject) {
  try {
    problem.pose_kernel().check_stochastic();
    KernelMatrix lik = problem.likelihood();
    if (inject) lik.row(lik.rows() / 2)[0] += 0.25;
    lik.check_stochastic();
    eta.check_stochastic();
  } catch (const NonStochasticRow& e) {
    return {"row-stochasticity", false, e.what()};
  }
  return {"row-stochasticity", true, "pose kernel, observation kernel and belief transition"};
}

CheckResult check_contraction(const RunConfig& config, const KnownPoseProblem& problem, const SimplexGrid& grid,
                              const BeliefTransition& eta) {
  const PlannedPolicy planned = solve_policy(problem, grid, eta, config.cost.kind, config.cost.lambda, config.solver);
  const auto& r = planned.solution.residuals;
  double worst = 0.0;
  for (std::size_t k = 1; k < r.size(); ++k)
    if (r[k - 1] > 0.0) worst = std::max(worst, r[k] / r[k - 1]);
  const bool ok = planned.solution.converged && worst <= config.solver.beta + 1e-9 &&
                  planned.solution.bellman_residual < 1e-6;
  std::ostringstream s;
  s << r.size() << " sweeps, max ratio " << worst << ", Bellman residual " << planned.solution.bellman_residual;
  return {"value-iteration-contraction", ok, s.str()};
}

}  // namespace

std::vector<CheckResult> run_verification(const RunConfig& config, const VerifyOptions& options) {
  std::mt19937_64 gen(options.seed);
  std::vector<CheckResult> out;
  out.push_back(check_ot(gen));
  out.push_back(check_reznik(gen));
  out.push_back(check_error_bound(gen));
  out.push_back(check_prior_average(options.seed));
  const KnownPoseProblem problem = config.make_problem();
  const SimplexGrid grid(problem.map_count(), config.problem.quant.denominator, config.problem.quant.grid_cap);
  const auto eta = build_known_pose_transition(grid, problem.likelihood(), problem.poses().size());
  out.push_back(check_rows(problem, eta, options.inject_fault));
  out.push_back(check_contraction(config, problem, grid, eta));
  return out;
}

}  // namespace aslam::cli
