#ifndef ASLAM_OBSERVATION_PARTITION_HPP
#define ASLAM_OBSERVATION_PARTITION_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "aslam/models.hpp"

namespace aslam {

/// Finite partition of the observation space.
///
/// Per landmark: `range_bins` equal-width range intervals on [eps, r_max]
/// times `bearing_bins` equal arcs of [-pi, pi), plus the null atom (the
/// last per-landmark index). Joint cells are products over landmarks in
/// mixed radix with landmark 0 least significant.
class ObservationPartition {
 public:
  ObservationPartition(const SensorConfig& sensor, std::size_t range_bins, std::size_t bearing_bins);

  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] std::size_t landmarks() const { return landmarks_; }
  /// Cells per landmark including the null atom.
  [[nodiscard]] std::size_t reading_cells() const { return range_bins_ * bearing_bins_ + 1; }
  [[nodiscard]] std::size_t null_reading() const { return range_bins_ * bearing_bins_; }

  [[nodiscard]] ReadingCell reading_cell(std::size_t k) const;
  [[nodiscard]] ObservationCell cell(std::size_t index) const;
  /// Per-landmark cell indices of a joint cell.
  [[nodiscard]] std::vector<std::size_t> digits(std::size_t index) const;

  /// Representative of a joint cell: cell centre per landmark, null for null.
  [[nodiscard]] Observation representative(std::size_t index) const;

  /// Cell containing a reading. Throws std::invalid_argument if out of range.
  [[nodiscard]] std::size_t locate_reading(const std::optional<RangeBearing>& reading) const;
  [[nodiscard]] std::size_t locate(const Observation& obs) const;

 private:
  double eps_, r_max_;
  std::size_t range_bins_, bearing_bins_, landmarks_, size_;
};

/// Builds the partition with n range bins and n bearing arcs per landmark.
ObservationPartition build_observation_partition(const SensorConfig& sensor, std::size_t n);

}  // namespace aslam

#endif
