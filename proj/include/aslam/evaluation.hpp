#ifndef ASLAM_EVALUATION_HPP
#define ASLAM_EVALUATION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "aslam/costs.hpp"
#include "aslam/geometry.hpp"
#include "aslam/parallel.hpp"
#include "aslam/problem.hpp"
#include "aslam/rng.hpp"
#include "aslam/simplex_grid.hpp"
#include "aslam/solver.hpp"

namespace aslam {

/// How the hidden world is simulated.
enum class SimulationMode {
  /// Continuous pose (step_pose) and continuous range-bearing readings,
  /// quantized to their observation cell.
  continuous,
  /// Pose cells and observation cells drawn from the quantized kernels;
  /// the filter is then the exact posterior of the simulated process.
  quantized,
};

/// Chooses an action from the current pose, its cell, the exact belief
/// and one policy uniform drawn for this step.
using ActionRule =
    std::function<std::uint32_t(std::size_t t, Vec2 pose, std::size_t pose_cell, std::span<const double> belief,
                                double policy_uniform)>;

/// Policy and value of one (cost, lambda) solve on a known-pose problem.
struct PlannedPolicy {
  Policy policy;
  Solution solution;
};

/// Solves the known-pose problem for one cost and lambda. `eta` is the
/// known-pose belief transition on `grid`.
PlannedPolicy solve_policy(const KnownPoseProblem& problem, const SimplexGrid& grid, const BeliefTransition& eta,
                           ExplorationKind kind, double lambda, const SolveOptions& options);

/// Extended tabulated policy (see extend_policy).
ActionRule tabulated_rule(const Policy& policy, const KnownPoseProblem& problem, const SimplexGrid& grid);

/// Uniform action over the net, driven by the policy substream.
ActionRule random_baseline_rule(std::size_t actions);

struct EpisodeOptions {
  std::size_t horizon = 20;
  SimulationMode mode = SimulationMode::continuous;
  bool keep_beliefs = false;
};

/// Random inputs consumed at one step; all are drawn every step.
struct StepDraws {
  Vec2 process_noise;
  std::vector<ReadingDraws> readings;
  double policy_uniform = 0.0;
  double pose_cell_uniform = 0.0;
  double observation_uniform = 0.0;
};

struct EpisodeRecord {
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::size_t true_map = 0;
  /// Entries t = 0..T.
  std::vector<Vec2> pose;
  std::vector<std::uint32_t> pose_cell;
  std::vector<std::uint32_t> belief_index;
  /// Action taken at t; -1 at t = T.
  std::vector<std::int64_t> action;
  /// Observation cell received at t; -1 at t = 0.
  std::vector<std::int64_t> observation;
  std::vector<double> msee;
  /// Cumulative effort sum_{k <= t} |u_k|^2 (no action at T).
  std::vector<double> effort;
  std::size_t skipped_updates = 0;
  /// FNV-1a of process-noise and detection draws, step by step.
  std::uint64_t draw_hash = 0;
  /// Exact beliefs, filled when EpisodeOptions::keep_beliefs is set.
  std::vector<std::vector<double>> beliefs;
};

/// |m* - E_b[m]|^2 over the map coordinates.
double squared_estimation_error(const KnownPoseProblem& problem, std::span<const double> belief, std::size_t true_map);

/// Per-purpose substreams of one trial.
class TrialStreams {
 public:
  TrialStreams(std::uint64_t master, std::uint64_t trial);

  /// Next step's draws; the number of values consumed per stream does not
  /// depend on the policy or on the simulation mode.
  StepDraws next(std::size_t landmarks);

 private:
  RandomStream process_, detection_, range_, bearing_, policy_, pose_cell_, observation_;
};

/// Closed-loop episode. The filter keeps the exact posterior over map atoms
/// (static map, likelihood at the current pose cell); the recorded grid
/// index is its Reznik quantization. An observation of zero likelihood
/// leaves the belief unchanged and is counted in `skipped_updates`.
EpisodeRecord simulate_episode(const KnownPoseProblem& problem, const SimplexGrid& grid, const ActionRule& rule,
                               std::size_t true_map, std::span<const double> b0, std::uint64_t master_seed,
                               std::uint64_t trial, const EpisodeOptions& options);

/// N paired episodes: trial k uses substreams (seed, k) and true map
/// k mod m, so trials are balanced over hypotheses and identical across
/// policies.
std::vector<EpisodeRecord> run_trials(const KnownPoseProblem& problem, const SimplexGrid& grid, const ActionRule& rule,
                                      std::span<const double> b0, std::size_t trials, std::uint64_t master_seed,
                                      const EpisodeOptions& options, Exec exec = Exec::parallel);

/// inf{x : F_N(x) >= level}, the sorted sample at index ceil(level N).
double empirical_quantile(std::span<const double> samples, double level);

/// Tail mean q + E[(X - q)+] / (1 - level) with q the empirical quantile.
double conditional_value_at_risk(std::span<const double> samples, double level);

/// Summation independent of input order (sorted before summing).
double order_free_mean(std::span<const double> samples);

struct TrialStats {
  std::size_t trials = 0;
  std::vector<double> mean_msee;
  std::vector<double> ci95_msee;  ///< half-width, normal approximation
  std::vector<double> mean_effort;
  double terminal_mean = 0.0;
  double q95 = 0.0;
  double q90 = 0.0;
  double cvar90 = 0.0;
  double terminal_effort = 0.0;
};

/// Statistics over >= 20 records of equal length; throws otherwise.
TrialStats terminal_stats(std::span<const EpisodeRecord> records);

/// One (noise, cost, lambda) cell of a sweep.
struct SweepRow {
  unsigned denominator = 0;
  double sigma_r = 0.0;
  double sigma_phi = 0.0;
  std::string policy;  ///< "rao", "shannon" or "random"
  double lambda = 0.0;
  std::size_t iterations = 0;
  TrialStats stats;
};

struct NoiseSetting {
  double sigma_r;
  double sigma_phi;
};

struct SweepPlan {
  std::vector<ExplorationKind> kinds{ExplorationKind::rao, ExplorationKind::shannon};
  std::vector<double> lambdas{1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000};
  std::vector<NoiseSetting> noise;
  std::vector<unsigned> denominators{5};
  std::size_t trials = 3000;
  std::size_t horizon = 20;
  std::uint64_t seed = 1;
  double beta = 0.95;
  double tol = 1e-6;
  int max_iter = 10'000;
  bool include_random = true;
};

/// Best lambda per (M, noise, cost) by CVaR90.
struct BestRow {
  unsigned denominator;
  double sigma_r, sigma_phi;
  std::string policy;
  double lambda;
  double cvar90;
};

/// Policy agreement between the two costs at one (M, noise, lambda).
struct AgreementRow {
  unsigned denominator;
  double sigma_r, sigma_phi;
  double lambda;
  double agreement;
};

/// CVaR90 gap H - W per (M, noise) with each cost at its best lambda.
struct GapRow {
  unsigned denominator;
  double sigma_r, sigma_phi;
  double cvar_shannon, cvar_rao, gap;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<BestRow> best;
  std::vector<AgreementRow> agreement;
  std::vector<GapRow> gaps;
};

/// Lambda sweep: per M and noise setting the belief transition is built
/// once; every (cost, lambda) pair is solved and evaluated on the same
/// paired trials. Empty `maps` means the lattice over the landmark space.
SweepResult lambda_sweep(const ProblemConfig& base, const std::vector<std::vector<Vec2>>& maps, const SweepPlan& plan,
                         Exec exec = Exec::parallel);

struct PriorAveragedCheck {
  double j_pa = 0.0;
  double se_pa = 0.0;
  double j_beta = 0.0;
  double se_beta = 0.0;
  /// Same estimates aggregated per time step first.
  double j_pa_by_time = 0.0;
  double j_beta_by_time = 0.0;
  double tail_bound = 0.0;
  double gap = 0.0;
  double allowed = 0.0;
  bool passed = false;
};

/// Paired Monte Carlo estimates of the prior-averaged cost
/// E sum beta^t W1(b_t, delta_M), M ~ prior, and of the belief cost
/// E sum beta^t W~1(b_t), both truncated after `horizon` terms, on the same
/// quantized-mode trajectories started from b0 = prior. Passes when the
/// gap is within 3 combined standard errors plus the truncation tail.
PriorAveragedCheck prior_averaged_check(const KnownPoseProblem& problem, const SimplexGrid& grid, const ActionRule& rule,
                                      std::span<const double> prior, std::size_t trials, std::size_t horizon,
                                      double beta, std::uint64_t seed, Exec exec = Exec::parallel);

struct PolicyValue {
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<double> samples;
};

/// Discounted cost sum_{t < horizon} beta^t (lambda rho_bar(b_t) + |u_t|^2)
/// of a rule in quantized mode with true maps balanced over atoms.
PolicyValue policy_value(const KnownPoseProblem& problem, const SimplexGrid& grid, const ActionRule& rule,
                         const ExplorationCost& exploration, double lambda, double beta, std::span<const double> b0,
                         std::size_t trials, std::size_t horizon, std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace aslam

#endif
