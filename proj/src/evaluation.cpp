#include "aslam/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "aslam/belief.hpp"
#include "aslam/metrics.hpp"

namespace aslam {

namespace {

// First index whose cumulative mass exceeds u; falls back to the last
// positive entry so roundoff in the row sum never yields a zero-mass index.
std::size_t sample_index(std::span<const double> row, double u) {
  double acc = 0.0;
  std::size_t last = row.size();
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] <= 0.0) continue;
    acc += row[i];
    last = i;
    if (u < acc) return i;
  }
  if (last == row.size()) throw std::invalid_argument("sample_index: row has no mass");
  return last;
}

double sample_sd(std::span<const double> x, double mean) {
  if (x.size() < 2) return 0.0;
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
  return std::sqrt(order_free_mean(sq) * static_cast<double>(x.size()) / static_cast<double>(x.size() - 1));
}

}  // namespace

TrialStreams::TrialStreams(std::uint64_t master, std::uint64_t trial)
    : process_(derive_seed(master, trial, Stream::process_noise)),
      detection_(derive_seed(master, trial, Stream::detection)),
      range_(derive_seed(master, trial, Stream::range)),
      bearing_(derive_seed(master, trial, Stream::bearing)),
      policy_(derive_seed(master, trial, Stream::policy)),
      pose_cell_(derive_seed(master, trial, Stream::pose_cell)),
      observation_(derive_seed(master, trial, Stream::observation_cell)) {}

StepDraws TrialStreams::next(std::size_t landmarks) {
  StepDraws d;
  d.process_noise.x = process_.normal();
  d.process_noise.y = process_.normal();
  d.readings.resize(landmarks);
  for (auto& r : d.readings) {
    r.detect_uniform = detection_.uniform();
    r.range_uniform = range_.uniform();
    r.bearing_normal = bearing_.normal();
  }
  d.policy_uniform = policy_.uniform();
  d.pose_cell_uniform = pose_cell_.uniform();
  d.observation_uniform = observation_.uniform();
  return d;
}

PlannedPolicy solve_policy(const KnownPoseProblem& problem, const SimplexGrid& grid, const BeliefTransition& eta,
                           ExplorationKind kind, double lambda, const SolveOptions& options) {
  const ExplorationCost exploration(kind, problem.map_space().distances());
  const StageCostTable costs = make_stage_costs(grid, exploration, lambda, problem.actions(), options.exec);
  PlannedPolicy out;
  out.solution = value_iteration_known_pose(eta, problem.pose_kernel(), costs, options);
  Policy& p = out.policy;
  p.poses = problem.poses().size();
  p.grid_size = grid.size();
  p.atoms = grid.atoms();
  p.denominator = grid.denominator();
  p.actions = problem.actions().size();
  p.kind = kind;
  p.lambda = lambda;
  p.beta = options.beta;
  p.table = out.solution.policy;
  return out;
}

ActionRule tabulated_rule(const Policy& policy, const KnownPoseProblem& problem, const SimplexGrid& grid) {
  return [&policy, &problem, &grid](std::size_t, Vec2 pose, std::size_t, std::span<const double> belief,
                                    double) { return extend_policy(policy, problem.poses(), grid, pose, belief); };
}

ActionRule random_baseline_rule(std::size_t actions) {
  if (actions == 0) throw std::invalid_argument("random_baseline_rule: empty action net");
  return [actions](std::size_t, Vec2, std::size_t, std::span<const double>, double u) {
    const auto a = static_cast<std::size_t>(u * static_cast<double>(actions));
    return static_cast<std::uint32_t>(std::min(a, actions - 1));
  };
}

double squared_estimation_error(const KnownPoseProblem& problem, std::span<const double> belief,
                                std::size_t true_map) {
  const FiniteSpace& space = problem.map_space();
  const std::size_t dim = space.dim();
  double err = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    double mean = 0.0;
    for (std::size_t m = 0; m < space.size(); ++m) mean += belief[m] * space.point(m)[k];
    const double e = space.point(true_map)[k] - mean;
    err += e * e;
  }
  return err;
}

EpisodeRecord simulate_episode(const KnownPoseProblem& problem, const SimplexGrid& grid, const ActionRule& rule,
                               std::size_t true_map, std::span<const double> b0, std::uint64_t master_seed,
                               std::uint64_t trial, const EpisodeOptions& options) {
  const std::size_t maps = problem.map_count();
  if (true_map >= maps) throw std::invalid_argument("simulate_episode: true map out of range");
  if (b0.size() != maps || grid.atoms() != maps) throw std::invalid_argument("simulate_episode: belief size mismatch");

  const ProblemConfig& cfg = problem.config();
  const BoxLattice& lattice = problem.poses();
  const auto& landmarks = problem.maps()[true_map];
  const std::size_t T = options.horizon;

  EpisodeRecord rec;
  rec.seed = master_seed;
  rec.trial = trial;
  rec.true_map = true_map;
  rec.pose.reserve(T + 1);

  std::vector<double> b(b0.begin(), b0.end());
  std::vector<double> next(maps), lik(maps);
  Vec2 pose = cfg.start;
  auto cell0 = lattice.locate(pose);
  if (!cell0) throw std::invalid_argument("simulate_episode: start pose outside workspace");
  std::size_t cell = *cell0;
  if (options.mode == SimulationMode::quantized) pose = lattice.space().planar(cell);

  auto record = [&](std::int64_t obs) {
    rec.pose.push_back(pose);
    rec.pose_cell.push_back(static_cast<std::uint32_t>(cell));
    rec.belief_index.push_back(static_cast<std::uint32_t>(reznik_quantize(b, grid)));
    rec.observation.push_back(obs);
    rec.msee.push_back(squared_estimation_error(problem, b, true_map));
    if (options.keep_beliefs) rec.beliefs.push_back(b);
  };
  record(-1);

  TrialStreams streams(master_seed, trial);
  Fnv1a hash;
  double effort = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    const StepDraws d = streams.next(landmarks.size());
    hash.add(d.process_noise.x);
    hash.add(d.process_noise.y);
    for (const auto& r : d.readings) hash.add(r.detect_uniform);

    const std::uint32_t a = rule(t, pose, cell, b, d.policy_uniform);
    const Vec2 u = problem.actions().at(a);
    rec.action.push_back(a);
    effort += u.squared_norm();
    rec.effort.push_back(effort);

    std::size_t y = 0;
    if (options.mode == SimulationMode::continuous) {
      pose = step_pose(cfg.motion, pose, u, d.process_noise);
      cell = *lattice.locate(pose);
      const Observation z = sample_observation(cfg.sensor, pose, landmarks, d.readings);
      y = problem.partition().locate(z);
    } else {
      cell = sample_index(problem.pose_kernel().row(cell, a), d.pose_cell_uniform);
      pose = lattice.space().planar(cell);
      y = sample_index(problem.likelihood().row(cell * maps + true_map, 0), d.observation_uniform);
    }

    problem.likelihood_column(cell, y, lik);
    if (static_update(b, lik, next) > 0.0) {
      b.swap(next);
    } else {
      ++rec.skipped_updates;
    }
    record(static_cast<std::int64_t>(y));
  }
  rec.action.push_back(-1);
  // No action at T, so the last entry repeats the total.
  rec.effort.push_back(effort);
  rec.draw_hash = hash.digest();
  return rec;
}

std::vector<EpisodeRecord> run_trials(const KnownPoseProblem& problem, const SimplexGrid& grid, const ActionRule& rule,
                                      std::span<const double> b0, std::size_t trials, std::uint64_t master_seed,
                                      const EpisodeOptions& options, Exec exec) {
  std::vector<EpisodeRecord> out(trials);
  const std::size_t maps = problem.map_count();
  const auto n = static_cast<std::int64_t>(trials);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t k = 0; k < n; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      out[kk] = simulate_episode(problem, grid, rule, kk % maps, b0, master_seed, kk, options);
    }
  } else {
    for (std::size_t k = 0; k < trials; ++k)
      out[k] = simulate_episode(problem, grid, rule, k % maps, b0, master_seed, k, options);
  }
  return out;
}

double empirical_quantile(std::span<const double> samples, double level) {
  if (samples.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
  if (!(level > 0.0 && level <= 1.0)) throw std::invalid_argument("empirical_quantile: level outside (0, 1]");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  // The 1e-9 guard keeps 0.9 * 3000 from rounding up to index 2701.
  auto k = static_cast<std::size_t>(std::ceil(level * n - 1e-9));
  k = std::clamp<std::size_t>(k, 1, x.size());
  return x[k - 1];
}

double conditional_value_at_risk(std::span<const double> samples, double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("conditional_value_at_risk: level outside (0, 1)");
  const double q = empirical_quantile(samples, level);
  std::vector<double> excess(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) excess[i] = std::max(samples[i] - q, 0.0);
  return q + order_free_mean(excess) / (1.0 - level);
}

double order_free_mean(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("order_free_mean: empty sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

TrialStats terminal_stats(std::span<const EpisodeRecord> records) {
  if (records.size() < 20) throw std::invalid_argument("terminal_stats: need at least 20 records");
  const std::size_t len = records.front().msee.size();
  for (const auto& r : records)
    if (r.msee.size() != len || r.effort.size() != len)
      throw std::invalid_argument("terminal_stats: records of unequal length");

  TrialStats s;
  s.trials = records.size();
  const double n = static_cast<double>(records.size());
  std::vector<double> col(records.size()), eff(records.size());
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t k = 0; k < records.size(); ++k) {
      col[k] = records[k].msee[t];
      eff[k] = records[k].effort[t];
    }
    const double mean = order_free_mean(col);
    s.mean_msee.push_back(mean);
    s.ci95_msee.push_back(1.96 * sample_sd(col, mean) / std::sqrt(n));
    s.mean_effort.push_back(order_free_mean(eff));
  }
  s.terminal_mean = s.mean_msee.back();
  s.q95 = empirical_quantile(col, 0.95);
  s.q90 = empirical_quantile(col, 0.90);
  s.cvar90 = conditional_value_at_risk(col, 0.90);
  s.terminal_effort = s.mean_effort.back();
  return s;
}

SweepResult lambda_sweep(const ProblemConfig& base, const std::vector<std::vector<Vec2>>& maps, const SweepPlan& plan,
                         Exec exec) {
  if (plan.noise.empty() || plan.lambdas.empty() || plan.denominators.empty())
    throw std::invalid_argument("lambda_sweep: empty sweep axis");
  SweepResult result;
  EpisodeOptions eo;
  eo.horizon = plan.horizon;
  eo.mode = SimulationMode::continuous;
  SolveOptions so;
  so.beta = plan.beta;
  so.tol = plan.tol;
  so.max_iter = plan.max_iter;
  so.exec = exec;

  KnownPoseProblem problem = maps.empty() ? KnownPoseProblem(base, exec) : KnownPoseProblem(base, maps, exec);
  const std::vector<double> b0(problem.map_count(), 1.0 / static_cast<double>(problem.map_count()));

  for (unsigned M : plan.denominators) {
    const SimplexGrid grid(problem.map_count(), M, base.quant.grid_cap);
    for (const NoiseSetting& ns : plan.noise) {
      problem.set_sensor_noise(ns.sigma_r, ns.sigma_phi, exec);
      const BeliefTransition eta =
          build_known_pose_transition(grid, problem.likelihood(), problem.poses().size(), exec);

      std::map<ExplorationKind, std::vector<Policy>> solved;
      for (ExplorationKind kind : plan.kinds) {
        BestRow best{M, ns.sigma_r, ns.sigma_phi, std::string(to_string(kind)), 0.0,
                     std::numeric_limits<double>::infinity()};
        for (double lambda : plan.lambdas) {
          PlannedPolicy planned = solve_policy(problem, grid, eta, kind, lambda, so);
          const auto records =
              run_trials(problem, grid, tabulated_rule(planned.policy, problem, grid), b0, plan.trials, plan.seed, eo, exec);
          SweepRow row{M, ns.sigma_r, ns.sigma_phi, best.policy, lambda, planned.solution.residuals.size(),
                       terminal_stats(records)};
          if (row.stats.cvar90 < best.cvar90) {
            best.cvar90 = row.stats.cvar90;
            best.lambda = lambda;
          }
          result.rows.push_back(std::move(row));
          solved[kind].push_back(std::move(planned.policy));
        }
        result.best.push_back(best);
      }
      if (plan.include_random) {
        const auto records = run_trials(problem, grid, random_baseline_rule(problem.actions().size()), b0,
                                        plan.trials, plan.seed, eo, exec);
        result.rows.push_back({M, ns.sigma_r, ns.sigma_phi, "random", 0.0, 0, terminal_stats(records)});
      }
      if (solved.count(ExplorationKind::rao) && solved.count(ExplorationKind::shannon)) {
        const auto& r = solved[ExplorationKind::rao];
        const auto& h = solved[ExplorationKind::shannon];
        for (std::size_t i = 0; i < plan.lambdas.size(); ++i)
          result.agreement.push_back({M, ns.sigma_r, ns.sigma_phi, plan.lambdas[i], policy_agreement(r[i], h[i])});
        const std::size_t nb = result.best.size();
        const BestRow& wr = result.best[nb - plan.kinds.size()];
        const BestRow& hr = result.best[nb - 1];
        const BestRow* rao_best = wr.policy == "rao" ? &wr : &hr;
        const BestRow* sh_best = wr.policy == "rao" ? &hr : &wr;
        result.gaps.push_back({M, ns.sigma_r, ns.sigma_phi, sh_best->cvar90, rao_best->cvar90,
                               sh_best->cvar90 - rao_best->cvar90});
      }
    }
  }
  return result;
}

namespace {

struct PairedSums {
  std::vector<double> a, b;
  std::vector<double> a_by_time, b_by_time;
};

}  // namespace

PriorAveragedCheck prior_averaged_check(const KnownPoseProblem& problem, const SimplexGrid& grid, const ActionRule& rule,
                                      std::span<const double> prior, std::size_t trials, std::size_t horizon,
                                      double beta, std::uint64_t seed, Exec exec) {
  if (trials < 2) throw std::invalid_argument("prior_averaged_check: need at least two trials");
  const DistanceMatrix& d = problem.map_space().distances();
  EpisodeOptions eo;
  eo.horizon = horizon;
  eo.mode = SimulationMode::quantized;
  eo.keep_beliefs = true;

  std::vector<double> ja(trials), jb(trials);
  std::vector<std::vector<double>> ta(horizon, std::vector<double>(trials)), tb(horizon, std::vector<double>(trials));
  const auto n = static_cast<std::int64_t>(trials);
  auto one = [&](std::size_t k) {
    RandomStream pick(derive_seed(seed, k, Stream::true_map));
    const std::size_t m = sample_index(prior, pick.uniform());
    const EpisodeRecord rec = simulate_episode(problem, grid, rule, m, prior, seed, k, eo);
    double disc = 1.0, a = 0.0, b = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
      const double wa = disc * wasserstein_to_dirac(rec.beliefs[t], m, d);
      const double wb = disc * rao_entropy(rec.beliefs[t], d);
      ta[t][k] = wa;
      tb[t][k] = wb;
      a += wa;
      b += wb;
      disc *= beta;
    }
    ja[k] = a;
    jb[k] = b;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t k = 0; k < n; ++k) one(static_cast<std::size_t>(k));
  } else {
    for (std::size_t k = 0; k < trials; ++k) one(k);
  }

  PriorAveragedCheck r;
  const double sn = std::sqrt(static_cast<double>(trials));
  r.j_pa = order_free_mean(ja);
  r.j_beta = order_free_mean(jb);
  r.se_pa = sample_sd(ja, r.j_pa) / sn;
  r.se_beta = sample_sd(jb, r.j_beta) / sn;
  for (std::size_t t = 0; t < horizon; ++t) {
    r.j_pa_by_time += order_free_mean(ta[t]);
    r.j_beta_by_time += order_free_mean(tb[t]);
  }
  // W~1(b) <= max_m W1(b, delta_m) <= diam.
  r.tail_bound = std::pow(beta, static_cast<double>(horizon)) * d.diameter() / (1.0 - beta);
  r.gap = std::abs(r.j_pa - r.j_beta);
  r.allowed = 3.0 * std::hypot(r.se_pa, r.se_beta) + r.tail_bound;
  r.passed = r.gap <= r.allowed;
  return r;
}

PolicyValue policy_value(const KnownPoseProblem& problem, const SimplexGrid& grid, const ActionRule& rule,
                         const ExplorationCost& exploration, double lambda, double beta, std::span<const double> b0,
                         std::size_t trials, std::size_t horizon, std::uint64_t seed, Exec exec) {
  if (trials < 2) throw std::invalid_argument("policy_value: need at least two trials");
  EpisodeOptions eo;
  eo.horizon = horizon;
  eo.mode = SimulationMode::quantized;
  eo.keep_beliefs = true;
  const auto records = run_trials(problem, grid, rule, b0, trials, seed, eo, exec);
  PolicyValue v;
  v.samples.resize(trials);
  for (std::size_t k = 0; k < trials; ++k) {
    const EpisodeRecord& rec = records[k];
    double disc = 1.0, sum = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
      const Vec2 u = problem.actions()[static_cast<std::size_t>(rec.action[t])];
      sum += disc * (lambda * exploration(rec.beliefs[t]) + u.squared_norm());
      disc *= beta;
    }
    v.samples[k] = sum;
  }
  v.mean = order_free_mean(v.samples);
  v.std_error = sample_sd(v.samples, v.mean) / std::sqrt(static_cast<double>(trials));
  return v;
}

}  // namespace aslam
