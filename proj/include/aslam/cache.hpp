#ifndef ASLAM_CACHE_HPP
#define ASLAM_CACHE_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "aslam/belief.hpp"
#include "aslam/kernels.hpp"
#include "aslam/simplex_grid.hpp"
#include "aslam/solver.hpp"

/**
 * \file
 * \brief Binary model cache and policy files.
 *
 * Both formats are little-endian: an 8-byte magic, a u32 format version,
 * the u64 hash the file is keyed by, then length-prefixed sections. Layouts
 * are documented in docs/formats.md.
 */

namespace aslam {

class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kCacheFormatVersion = 1;

/// Everything that is expensive or hash-keyed in a known-pose model.
struct ModelCache {
  std::uint64_t model_hash = 0;
  KernelMatrix pose_kernel;
  KernelMatrix likelihood;
  std::size_t atoms = 0;
  unsigned denominator = 0;
  std::vector<Level> levels;  ///< grid points, row-major
  BeliefTransition eta;
};

void write_model_cache(const std::filesystem::path& path, const ModelCache& cache);

/// Throws CacheError if the file is missing, truncated, of another format
/// version, or keyed by a different hash.
ModelCache read_model_cache(const std::filesystem::path& path, std::uint64_t expected_hash);

/// Cache file name for a model hash.
std::string model_cache_name(std::uint64_t model_hash);

/// Solved policy with its value function.
struct PolicyFile {
  std::uint64_t config_hash = 0;
  std::uint64_t model_hash = 0;
  std::string version;
  Policy policy;
  std::vector<double> value;
  std::uint64_t iterations = 0;
  double bellman_residual = 0.0;
};

void write_policy_file(const std::filesystem::path& path, const PolicyFile& file);
PolicyFile read_policy_file(const std::filesystem::path& path);

}  // namespace aslam

#endif
