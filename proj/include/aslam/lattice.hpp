#ifndef ASLAM_LATTICE_HPP
#define ASLAM_LATTICE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "aslam/geometry.hpp"
#include "aslam/metrics.hpp"

namespace aslam {

/// Indexed point set with its pairwise Euclidean distances.
class FiniteSpace {
 public:
  FiniteSpace() = default;
  /// All points must share one dimension.
  explicit FiniteSpace(std::vector<std::vector<double>> points);

  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] std::size_t dim() const { return points_.empty() ? 0 : points_.front().size(); }
  [[nodiscard]] std::span<const double> point(std::size_t i) const { return points_[i]; }
  [[nodiscard]] const std::vector<std::vector<double>>& points() const { return points_; }
  [[nodiscard]] const DistanceMatrix& distances() const { return distances_; }

  /// Point i read as a planar vector (first two coordinates).
  [[nodiscard]] Vec2 planar(std::size_t i) const { return {points_[i][0], points_[i][1]}; }

 private:
  std::vector<std::vector<double>> points_;
  DistanceMatrix distances_;
};

/// Axis-aligned box [lo, hi] in any dimension.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  [[nodiscard]] std::size_t dim() const { return lo.size(); }
  [[nodiscard]] bool contains(std::span<const double> x) const;

  /// The square workspace [-L, L]^2 repeated `copies` times.
  static Box square(double half_width, std::size_t copies = 1);
};

/// Uniform lattice quantizer over a box.
///
/// Cells are half-open [lo, hi) per axis except the last cell on each axis,
/// which is closed so the cells tile the box exactly. Representatives are
/// cell centres. Index order is row-major with axis 0 fastest.
class BoxLattice {
 public:
  BoxLattice(Box workspace, std::vector<std::size_t> cells_per_axis);

  [[nodiscard]] const FiniteSpace& space() const { return space_; }
  [[nodiscard]] std::size_t size() const { return space_.size(); }
  [[nodiscard]] const Box& workspace() const { return workspace_; }
  [[nodiscard]] const std::vector<std::size_t>& cells_per_axis() const { return counts_; }

  /// Cell of representative i.
  [[nodiscard]] Box cell(std::size_t i) const;

  /// Index of the cell containing x, or nullopt outside the box.
  [[nodiscard]] std::optional<std::size_t> locate(std::span<const double> x) const;
  [[nodiscard]] std::optional<std::size_t> locate(Vec2 x) const {
    const double c[2] = {x.x, x.y};
    return locate(c);
  }

  /// Largest distance from a point to its representative, with the
  /// workspace rescaled to unit side length.
  [[nodiscard]] double normalized_covering_radius() const;

  /// Cell boundaries along one axis (counts + 1 values).
  [[nodiscard]] std::vector<double> edges(std::size_t axis) const;

 private:
  Box workspace_;
  std::vector<std::size_t> counts_;
  FiniteSpace space_;
};

/// Lattice with d(s, Q(s)) < 1/n in units of the workspace side.
BoxLattice build_state_lattice(const Box& workspace, std::size_t n);

/// Finite 1/n-net (absolute units) of the speed disc {|u| <= v_max}.
///
/// Hexagonal lattice of covering radius 1/n through the origin; lattice
/// points that fall outside the disc are projected onto its boundary. The
/// zero action is index 0.
std::vector<Vec2> build_action_net(double v_max, std::size_t n);

}  // namespace aslam

#endif
