#include "aslam/costs.hpp"

#include <cmath>
#include <stdexcept>

namespace aslam {

std::string_view to_string(ExplorationKind kind) { return kind == ExplorationKind::rao ? "rao" : "shannon"; }

ExplorationKind parse_exploration_kind(std::string_view text) {
  if (text == "rao") return ExplorationKind::rao;
  if (text == "shannon") return ExplorationKind::shannon;
  throw std::invalid_argument("unknown exploration cost '" + std::string(text) + "' (expected rao or shannon)");
}

double rao_entropy(std::span<const double> b, const DistanceMatrix& d) {
  if (b.size() != d.size()) {
    throw std::invalid_argument("rao_entropy: belief and distance matrix disagree in size");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] == 0.0) continue;
    const auto row = d.row(i);
    double inner = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      inner += row[j] * b[j];
    }
    total += b[i] * inner;
  }
  return total;
}

double shannon_entropy(std::span<const double> b) {
  double h = 0.0;
  for (double p : b) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double information_gain(std::span<const double> b, std::span<const WeightedBelief> successors) {
  double expected = 0.0;
  for (const auto& s : successors) {
    expected += s.prob * shannon_entropy(s.belief);
  }
  return shannon_entropy(b) - expected;
}

ExplorationCost::ExplorationCost(ExplorationKind kind, const DistanceMatrix& d) : kind_(kind), d_(&d) {
  scale_ = kind == ExplorationKind::rao ? d.diameter() : std::log(static_cast<double>(d.size()));
  if (!(scale_ > 0.0)) {
    throw std::invalid_argument("ExplorationCost: need at least two distinct atoms to normalize");
  }
}

double ExplorationCost::raw(std::span<const double> b) const {
  return kind_ == ExplorationKind::rao ? rao_entropy(b, *d_) : shannon_entropy(b);
}

double ExplorationCost::operator()(std::span<const double> b) const { return raw(b) / scale_; }

double stage_cost(std::span<const double> b, Vec2 u, const CostConfig& cfg, const ExplorationCost& exploration) {
  return cfg.lambda * exploration(b) + u.squared_norm();
}

}  // namespace aslam
