#include "aslam/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aslam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_options(const SolveOptions& options) {
  if (!(options.beta > 0.0 && options.beta < 1.0)) {
    throw std::invalid_argument("value iteration: beta must lie in (0, 1)");
  }
  if (!(options.tol > 0.0) || options.max_iter < 1) {
    throw std::invalid_argument("value iteration: need tol > 0 and max_iter >= 1");
  }
}

double sup_change(const std::vector<double>& a, const std::vector<double>& b) {
  double change = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    change = std::max(change, std::abs(a[k] - b[k]));
  }
  return change;
}

// Runs sweeps until the stopping rule holds; `sweep(V, out, policy)` writes T V.
template <class Sweep>
Solution iterate(std::size_t states, const SolveOptions& options, Sweep&& sweep) {
  Solution sol;
  sol.value.assign(states, 0.0);
  sol.policy.assign(states, 0);
  std::vector<double> next(states, 0.0);
  const double stop = options.tol * (1.0 - options.beta) / (2.0 * options.beta);
  for (int k = 0; k < options.max_iter; ++k) {
    sweep(sol.value, next, sol.policy);
    const double change = sup_change(sol.value, next);
    sol.residuals.push_back(change);
    sol.value.swap(next);
    if (change < stop) {
      sol.converged = true;
      break;
    }
  }
  // Greedy policy and Bellman residual at the returned values.
  sweep(sol.value, next, sol.policy);
  sol.bellman_residual = sup_change(sol.value, next);
  return sol;
}

}  // namespace

Solution value_iteration(const BeliefTransition& transition, const CostTable& costs, const SolveOptions& options) {
  check_options(options);
  transition.check_stochastic();
  const std::size_t states = transition.grid_size();
  const std::size_t actions = transition.inputs();
  if (costs.states != states || costs.actions != actions || costs.cost.size() != states * actions) {
    throw std::invalid_argument("value_iteration: cost table does not match the transition");
  }
  const double beta = options.beta;
  auto backup = [&](const std::vector<double>& v, std::vector<double>& out, std::vector<std::uint32_t>& policy,
                    std::size_t s) {
    double best = kInf;
    std::uint32_t arg = 0;
    for (std::size_t u = 0; u < actions; ++u) {
      double expect = 0.0;
      for (const GridTransition& e : transition.row(s, u)) {
        expect += e.prob * v[e.next];
      }
      const double q = costs(s, u) + beta * expect;
      if (q < best) {
        best = q;
        arg = static_cast<std::uint32_t>(u);
      }
    }
    out[s] = best;
    policy[s] = arg;
  };
  auto sweep = [&](const std::vector<double>& v, std::vector<double>& out, std::vector<std::uint32_t>& policy) {
    if (options.exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
      for (long s = 0; s < static_cast<long>(states); ++s) {
        backup(v, out, policy, static_cast<std::size_t>(s));
      }
    } else {
      for (std::size_t s = 0; s < states; ++s) {
        backup(v, out, policy, s);
      }
    }
  };
  return iterate(states, options, sweep);
}

double StageCostTable::max_cost() const {
  const double b = belief_term.empty() ? 0.0 : *std::max_element(belief_term.begin(), belief_term.end());
  const double a = action_term.empty() ? 0.0 : *std::max_element(action_term.begin(), action_term.end());
  return a + b;
}

StageCostTable make_stage_costs(const SimplexGrid& grid, const ExplorationCost& exploration, double lambda,
                                std::span<const Vec2> actions, Exec exec) {
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("make_stage_costs: lambda must be nonnegative");
  }
  StageCostTable table;
  table.belief_term.resize(grid.size());
  auto fill = [&](std::size_t i) { table.belief_term[i] = lambda * exploration(grid.belief(i)); };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(grid.size()); ++i) fill(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) fill(i);
  }
  for (const Vec2& u : actions) {
    table.action_term.push_back(u.squared_norm());
  }
  return table;
}

SparsePoseKernel::SparsePoseKernel(const KernelMatrix& kernel)
    : poses_(kernel.states()), actions_(kernel.inputs()), offsets_(kernel.rows() + 1, 0) {
  for (std::size_t r = 0; r < kernel.rows(); ++r) {
    const auto row = kernel.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] > 0.0) entries_.push_back({static_cast<std::uint32_t>(j), row[j]});
    }
    offsets_[r + 1] = entries_.size();
  }
}

Solution value_iteration_known_pose(const BeliefTransition& observation_update, const KernelMatrix& pose_kernel,
                                    const StageCostTable& costs, const SolveOptions& options) {
  check_options(options);
  pose_kernel.check_stochastic();
  observation_update.check_stochastic();
  const std::size_t poses = pose_kernel.states();
  const std::size_t actions = pose_kernel.inputs();
  const std::size_t grid = observation_update.grid_size();
  if (observation_update.inputs() != poses || pose_kernel.cols() != poses) {
    throw std::invalid_argument("value_iteration_known_pose: kernels disagree on the pose count");
  }
  if (costs.belief_term.size() != grid || costs.action_term.size() != actions) {
    throw std::invalid_argument("value_iteration_known_pose: cost table does not match grid/actions");
  }
  const SparsePoseKernel sparse(pose_kernel);
  const double beta = options.beta;
  std::vector<double> after_obs(poses * grid);

  constexpr std::size_t chunk = 512;
  const std::size_t chunks_per_pose = (grid + chunk - 1) / chunk;
  const std::size_t tasks = poses * chunks_per_pose;

  // W(j, b) = sum_b' eta_j(b' | b) V(j, b')
  auto observe = [&](const std::vector<double>& v, std::size_t r) {
    const std::size_t j = r / grid;
    const std::size_t i = r % grid;
    const double* vj = v.data() + j * grid;
    double acc = 0.0;
    for (const GridTransition& e : observation_update.row(i, j)) acc += e.prob * vj[e.next];
    after_obs[r] = acc;
  };
  auto backup = [&](std::vector<double>& out, std::vector<std::uint32_t>& policy, std::size_t task) {
    const std::size_t pose = task / chunks_per_pose;
    const std::size_t lo = (task % chunks_per_pose) * chunk;
    const std::size_t n = std::min(chunk, grid - lo);
    double best[chunk];
    double acc[chunk];
    std::uint32_t arg[chunk];
    std::fill_n(best, n, kInf);
    std::fill_n(arg, n, 0u);
    for (std::size_t u = 0; u < actions; ++u) {
      std::fill_n(acc, n, 0.0);
      for (const auto& e : sparse.row(pose, u)) {
        const double* w = after_obs.data() + e.next * grid + lo;
        for (std::size_t b = 0; b < n; ++b) acc[b] += e.prob * w[b];
      }
      const double effort = costs.action_term[u];
      for (std::size_t b = 0; b < n; ++b) {
        const double q = effort + beta * acc[b];
        if (q < best[b]) {
          best[b] = q;
          arg[b] = static_cast<std::uint32_t>(u);
        }
      }
    }
    for (std::size_t b = 0; b < n; ++b) {
      out[pose * grid + lo + b] = costs.belief_term[lo + b] + best[b];
      policy[pose * grid + lo + b] = arg[b];
    }
  };
  auto sweep = [&](const std::vector<double>& v, std::vector<double>& out, std::vector<std::uint32_t>& policy) {
    if (options.exec == Exec::parallel) {
#pragma omp parallel
      {
#pragma omp for schedule(static)
        for (long r = 0; r < static_cast<long>(poses * grid); ++r) observe(v, static_cast<std::size_t>(r));
#pragma omp for schedule(static)
        for (long t = 0; t < static_cast<long>(tasks); ++t) backup(out, policy, static_cast<std::size_t>(t));
      }
    } else {
      for (std::size_t r = 0; r < poses * grid; ++r) observe(v, r);
      for (std::size_t t = 0; t < tasks; ++t) backup(out, policy, t);
    }
  };
  return iterate(poses * grid, options, sweep);
}

std::uint32_t extend_policy(const Policy& policy, const BoxLattice& poses, const SimplexGrid& grid, Vec2 pose,
                            std::span<const double> belief) {
  if (policy.poses != poses.size() || policy.grid_size != grid.size() || policy.atoms != grid.atoms() ||
      policy.denominator != grid.denominator()) {
    throw std::invalid_argument("extend_policy: policy was solved on a different quantization");
  }
  const auto cell = poses.locate(pose);
  if (!cell) {
    throw std::invalid_argument("extend_policy: pose outside the workspace");
  }
  return policy.action(*cell, reznik_quantize(belief, grid));
}

double policy_agreement(const Policy& a, const Policy& b) {
  if (a.table.size() != b.table.size() || a.table.empty()) {
    throw std::invalid_argument("policy_agreement: policies have different state spaces");
  }
  std::size_t same = 0;
  for (std::size_t k = 0; k < a.table.size(); ++k) {
    same += a.table[k] == b.table[k] ? 1 : 0;
  }
  return static_cast<double>(same) / static_cast<double>(a.table.size());
}

}  // namespace aslam
