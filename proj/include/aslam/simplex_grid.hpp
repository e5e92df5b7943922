#ifndef ASLAM_SIMPLEX_GRID_HPP
#define ASLAM_SIMPLEX_GRID_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace aslam {

/// Count type for grid coordinates k_i (probability k_i / M).
using Level = std::uint16_t;

/// Default refusal threshold for grid enumeration.
inline constexpr std::uint64_t kDefaultGridCap = 20'000'000;

class GridTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// All probability vectors (k_1/M, ..., k_m/M) with sum k_i = M.
///
/// Points are enumerated in colexicographic order of (k_1, ..., k_m): the
/// last coordinate is most significant. `index_of` is the exact inverse of
/// the enumeration, computed with the combinatorial number system.
class SimplexGrid {
 public:
  /// Throws GridTooLarge when C(M+m-1, m-1) exceeds `cap`.
  SimplexGrid(std::size_t atoms, unsigned denominator, std::uint64_t cap = kDefaultGridCap);

  /// C(M+m-1, m-1), saturating at UINT64_MAX.
  static std::uint64_t cardinality(std::size_t atoms, unsigned denominator);

  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] std::size_t atoms() const { return atoms_; }
  [[nodiscard]] unsigned denominator() const { return denominator_; }

  [[nodiscard]] std::span<const Level> levels(std::size_t index) const {
    return {levels_.data() + index * atoms_, atoms_};
  }
  /// Grid point as a probability vector.
  [[nodiscard]] std::vector<double> belief(std::size_t index) const;
  void belief(std::size_t index, std::span<double> out) const;

  /// Grid index of an integer composition of M. Throws std::invalid_argument
  /// if the levels do not sum to M.
  [[nodiscard]] std::size_t index_of(std::span<const Level> levels) const;

 private:
  [[nodiscard]] std::uint64_t compositions(std::size_t parts, unsigned total) const;

  std::size_t atoms_;
  unsigned denominator_;
  std::size_t size_;
  std::vector<Level> levels_;
  // compositions_[p * (M + 1) + s] = number of compositions of s into p parts.
  std::vector<std::uint64_t> compositions_;
};

/// Nearest grid levels to `b` in Euclidean distance.
///
/// Round M*b_i to the nearest integer, then repair the sum: if it overshoots
/// by d, decrement the d entries with the largest rounding residual
/// k_i - M b_i; if it undershoots, increment those with the smallest.
/// Equidistant candidates resolve to the lowest grid index: removals hit
/// the highest tied coordinate, additions the lowest. O(m log m).
std::vector<Level> reznik_levels(std::span<const double> b, unsigned denominator);

/// Grid index of the nearest grid point to `b`.
std::size_t reznik_quantize(std::span<const double> b, const SimplexGrid& grid);

/// 1/n + (D/M) a (m - a) / m with a = floor(m / 2).
double quantization_error_bound(double n, unsigned denominator, std::size_t atoms, double diameter);

}  // namespace aslam

#endif
