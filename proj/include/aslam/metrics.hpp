#ifndef ASLAM_METRICS_HPP
#define ASLAM_METRICS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace aslam {

/// Tolerance used when checking that a probability vector sums to one.
inline constexpr double kSimplexTolerance = 1e-9;

/// A joint (pose, map) state in coordinates.
struct JointState {
  std::vector<double> pose;
  std::vector<double> map;
};

/// Euclidean distance between two coordinate tuples of equal dimension.
double euclidean(std::span<const double> a, std::span<const double> b);

/// Product metric (d_X^p + d_M^p)^(1/p) on the joint state space.
///
/// Throws std::invalid_argument if `p < 1` or the states disagree on
/// pose/map dimension.
double product_distance(const JointState& a, const JointState& b, double p = 2.0);

/// Dense symmetric distance matrix over a finite point set.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  /// Takes ownership of an n*n row-major table; validates zero diagonal and symmetry.
  DistanceMatrix(std::size_t n, std::vector<double> entries);

  /// Euclidean distances between the given coordinate tuples.
  static DistanceMatrix euclidean(const std::vector<std::vector<double>>& points);

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const { return {d_.data() + i * n_, n_}; }
  [[nodiscard]] double diameter() const { return diameter_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
  double diameter_ = 0.0;
};

/// Total variation distance, half the l1 distance.
double total_variation(std::span<const double> mu, std::span<const double> nu);

/// Exact discrete 1-Wasserstein distance.
///
/// Solves the transport LP min sum psi_ij d_ij subject to the marginals by
/// successive shortest augmenting paths on the complete bipartite network.
/// Throws std::invalid_argument when the sizes disagree or the two total
/// masses differ by more than kSimplexTolerance.
double wasserstein1(std::span<const double> mu, std::span<const double> nu, const DistanceMatrix& d);

/// W1(b, delta_m) = sum_i b_i d(i, m).
double wasserstein_to_dirac(std::span<const double> b, std::size_t m, const DistanceMatrix& d);

}  // namespace aslam

#endif
