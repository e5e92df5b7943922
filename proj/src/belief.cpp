#include "aslam/belief.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace aslam {

BeliefVector::BeliefVector(std::vector<double> p, double tol) : p_(std::move(p)) {
  double sum = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("BeliefVector: negative or NaN probability");
    }
    sum += v;
  }
  if (!(std::abs(sum - 1.0) <= tol)) {
    throw std::invalid_argument("BeliefVector: probabilities sum to " + std::to_string(sum));
  }
}

BeliefVector BeliefVector::dirac(std::size_t atoms, std::size_t at) {
  std::vector<double> p(atoms, 0.0);
  p.at(at) = 1.0;
  return BeliefVector(std::move(p));
}

BeliefVector BeliefVector::uniform(std::size_t atoms) {
  return BeliefVector(std::vector<double>(atoms, 1.0 / static_cast<double>(atoms)));
}

std::vector<double> predict(std::span<const double> b, std::size_t action, const KernelMatrix& transition) {
  if (b.size() != transition.states() || transition.cols() != transition.states()) {
    throw std::invalid_argument("predict: belief and transition kernel disagree in size");
  }
  std::vector<double> out(transition.cols(), 0.0);
  for (std::size_t s = 0; s < b.size(); ++s) {
    if (b[s] == 0.0) continue;
    const auto row = transition.row(s, action);
    for (std::size_t t = 0; t < out.size(); ++t) {
      out[t] += b[s] * row[t];
    }
  }
  return out;
}

namespace {

std::size_t observation_input(const KernelMatrix& transition, const KernelMatrix& observation, std::size_t action) {
  if (observation.states() != transition.states()) {
    throw std::invalid_argument("observation kernel and transition kernel disagree on state count");
  }
  if (observation.inputs() == 1) return 0;
  if (observation.inputs() != transition.inputs()) {
    throw std::invalid_argument("observation kernel must have one input or one per action");
  }
  return action;
}

}  // namespace

BeliefVector bayes_update(const BeliefVector& b, std::size_t action, std::size_t y, const KernelMatrix& transition,
                          const KernelMatrix& observation) {
  const std::size_t oin = observation_input(transition, observation, action);
  if (y >= observation.cols()) {
    throw std::out_of_range("bayes_update: observation index");
  }
  std::vector<double> post = predict(b.values(), action, transition);
  double norm = 0.0;
  for (std::size_t s = 0; s < post.size(); ++s) {
    post[s] *= observation(observation.row_index(s, oin), y);
    norm += post[s];
  }
  if (!(norm > 0.0)) {
    throw ImpossibleObservation(y);
  }
  for (double& v : post) v /= norm;
  return BeliefVector(std::move(post), 1e-8);
}

double static_update(std::span<const double> b, std::span<const double> likelihood, std::span<double> out) {
  double norm = 0.0;
  for (std::size_t m = 0; m < b.size(); ++m) {
    norm += b[m] * likelihood[m];
  }
  if (!(norm > 0.0)) {
    return 0.0;
  }
  for (std::size_t m = 0; m < b.size(); ++m) {
    out[m] = b[m] * likelihood[m] / norm;
  }
  return norm;
}

std::vector<double> predictive_observation(const BeliefVector& b, std::size_t action, const KernelMatrix& transition,
                                           const KernelMatrix& observation) {
  const std::size_t oin = observation_input(transition, observation, action);
  const std::vector<double> pred = predict(b.values(), action, transition);
  std::vector<double> g(observation.cols(), 0.0);
  for (std::size_t s = 0; s < pred.size(); ++s) {
    if (pred[s] == 0.0) continue;
    const auto row = observation.row(s, oin);
    for (std::size_t y = 0; y < g.size(); ++y) {
      g[y] += pred[s] * row[y];
    }
  }
  return g;
}

BeliefTransition::BeliefTransition(std::size_t grid_size, std::size_t inputs, std::vector<std::uint64_t> offsets,
                                   std::vector<GridTransition> entries)
    : grid_size_(grid_size), inputs_(inputs), offsets_(std::move(offsets)), entries_(std::move(entries)) {
  if (offsets_.size() != grid_size_ * inputs_ + 1 || offsets_.back() != entries_.size()) {
    throw std::invalid_argument("BeliefTransition: inconsistent sparse layout");
  }
}

void BeliefTransition::check_stochastic(double tol) const {
  for (std::size_t r = 0; r < rows(); ++r) {
    double sum = 0.0;
    for (std::uint64_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
      if (!(entries_[k].prob >= 0.0) || entries_[k].next >= grid_size_) {
        throw NonStochasticRow(r, entries_[k].prob);
      }
      sum += entries_[k].prob;
    }
    if (!(std::abs(sum - 1.0) <= tol)) {
      throw NonStochasticRow(r, sum);
    }
  }
}

namespace {

// Obs-major likelihood table lik[y * atoms + s] for one input.
using LikelihoodTable = std::vector<double>;

void quantize_successors(const SimplexGrid& grid, std::span<const double> pred, const LikelihoodTable& lik,
                         std::size_t observations, std::vector<GridTransition>& out) {
  const std::size_t atoms = pred.size();
  std::vector<double> post(atoms);
  out.clear();
  for (std::size_t y = 0; y < observations; ++y) {
    const double* l = lik.data() + y * atoms;
    double g = 0.0;
    for (std::size_t s = 0; s < atoms; ++s) g += l[s] * pred[s];
    if (!(g > 0.0)) continue;
    for (std::size_t s = 0; s < atoms; ++s) post[s] = l[s] * pred[s] / g;
    out.push_back({static_cast<std::uint32_t>(reznik_quantize(post, grid)), g});
  }
  std::sort(out.begin(), out.end(), [](const GridTransition& a, const GridTransition& b) { return a.next < b.next; });
  std::size_t w = 0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (w > 0 && out[w - 1].next == out[k].next) {
      out[w - 1].prob += out[k].prob;
    } else {
      out[w++] = out[k];
    }
  }
  out.resize(w);
}

template <class RowFn>
BeliefTransition assemble(std::size_t grid_size, std::size_t inputs, Exec exec, RowFn&& fill_row) {
  const std::size_t rows = grid_size * inputs;
  std::vector<std::vector<GridTransition>> per_row(rows);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 256)
    for (long r = 0; r < static_cast<long>(rows); ++r) {
      fill_row(static_cast<std::size_t>(r), per_row[static_cast<std::size_t>(r)]);
    }
  } else {
    for (std::size_t r = 0; r < rows; ++r) {
      fill_row(r, per_row[r]);
    }
  }
  std::vector<std::uint64_t> offsets(rows + 1, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    offsets[r + 1] = offsets[r] + per_row[r].size();
  }
  std::vector<GridTransition> entries;
  entries.reserve(offsets.back());
  for (auto& row : per_row) {
    entries.insert(entries.end(), row.begin(), row.end());
    std::vector<GridTransition>().swap(row);
  }
  return BeliefTransition(grid_size, inputs, std::move(offsets), std::move(entries));
}

}  // namespace

BeliefTransition build_belief_transition(const SimplexGrid& grid, std::size_t actions, const KernelMatrix& transition,
                                         const KernelMatrix& observation, Exec exec) {
  const std::size_t atoms = grid.atoms();
  if (transition.states() != atoms || transition.inputs() != actions) {
    throw std::invalid_argument("build_belief_transition: transition kernel does not match grid/actions");
  }
  const std::size_t obs = observation.cols();
  std::vector<LikelihoodTable> tables(actions, LikelihoodTable(obs * atoms));
  for (std::size_t u = 0; u < actions; ++u) {
    const std::size_t oin = observation_input(transition, observation, u);
    for (std::size_t s = 0; s < atoms; ++s) {
      const auto row = observation.row(s, oin);
      for (std::size_t y = 0; y < obs; ++y) tables[u][y * atoms + s] = row[y];
    }
  }
  return assemble(grid.size(), actions, exec, [&](std::size_t r, std::vector<GridTransition>& out) {
    const std::size_t u = r / grid.size();
    const std::size_t i = r % grid.size();
    const std::vector<double> pred = predict(grid.belief(i), u, transition);
    quantize_successors(grid, pred, tables[u], obs, out);
  });
}

BeliefTransition build_known_pose_transition(const SimplexGrid& grid, const KernelMatrix& likelihood,
                                             std::size_t poses, Exec exec) {
  const std::size_t maps = grid.atoms();
  if (likelihood.states() != poses * maps || likelihood.inputs() != 1) {
    throw std::invalid_argument("build_known_pose_transition: likelihood must be over (pose, map) states");
  }
  const std::size_t obs = likelihood.cols();
  std::vector<LikelihoodTable> tables(poses, LikelihoodTable(obs * maps));
  for (std::size_t j = 0; j < poses; ++j) {
    for (std::size_t m = 0; m < maps; ++m) {
      const auto row = likelihood.row(j * maps + m);
      for (std::size_t y = 0; y < obs; ++y) tables[j][y * maps + m] = row[y];
    }
  }
  return assemble(grid.size(), poses, exec, [&](std::size_t r, std::vector<GridTransition>& out) {
    const std::size_t j = r / grid.size();
    const std::size_t i = r % grid.size();
    quantize_successors(grid, grid.belief(i), tables[j], obs, out);
  });
}

}  // namespace aslam
