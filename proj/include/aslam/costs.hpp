#ifndef ASLAM_COSTS_HPP
#define ASLAM_COSTS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aslam/geometry.hpp"
#include "aslam/metrics.hpp"

namespace aslam {

enum class ExplorationKind { rao, shannon };

std::string_view to_string(ExplorationKind kind);
/// Parses "rao" or "shannon"; throws std::invalid_argument otherwise.
ExplorationKind parse_exploration_kind(std::string_view text);

/// Rao quadratic entropy b^T D b, equal to the b-average of W1(b, delta_m).
double rao_entropy(std::span<const double> b, const DistanceMatrix& d);

/// Shannon entropy in nats with 0 ln 0 = 0.
double shannon_entropy(std::span<const double> b);

/// Successor belief with its probability.
struct WeightedBelief {
  double prob;
  std::vector<double> belief;
};

/// r_IG = H(b) - sum_j p_j H(b_j).
double information_gain(std::span<const double> b, std::span<const WeightedBelief> successors);

struct CostConfig {
  double lambda = 200.0;
  double beta = 0.95;
  ExplorationKind kind = ExplorationKind::rao;
};

/// Exploration cost normalized to [0, 1]: Rao entropy over the map
/// diameter, or Shannon entropy over ln(atoms).
class ExplorationCost {
 public:
  ExplorationCost(ExplorationKind kind, const DistanceMatrix& d);

  [[nodiscard]] double operator()(std::span<const double> b) const;
  [[nodiscard]] ExplorationKind kind() const { return kind_; }
  /// Unnormalized cost.
  [[nodiscard]] double raw(std::span<const double> b) const;
  [[nodiscard]] double scale() const { return scale_; }

 private:
  ExplorationKind kind_;
  const DistanceMatrix* d_;
  double scale_;
};

/// lambda * rho_bar(b) + |u|^2.
double stage_cost(std::span<const double> b, Vec2 u, const CostConfig& cfg, const ExplorationCost& exploration);

}  // namespace aslam

#endif
